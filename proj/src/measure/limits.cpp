#include "blackstart/measure/limits.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "blackstart/measure/signal.hpp"

namespace blackstart::measure {

void LimitEnvelope::validate() const {
  if (!(v_min_pu < v_max_pu)) {
    throw MeasureError("voltage band must have lower < upper");
  }
  if (!(f_min_hz < f_max_hz)) {
    throw MeasureError("frequency band must have lower < upper");
  }
  if (!(current_cap_pu > 0.0)) {
    throw MeasureError("current cap must be positive");
  }
  if (!(debounce_s >= 0.0)) {
    throw MeasureError("debounce must not be negative");
  }
}

const char* to_string(LimitKind kind) {
  switch (kind) {
    case LimitKind::Voltage:
      return "voltage";
    case LimitKind::Frequency:
      return "frequency";
    case LimitKind::Current:
      return "current";
  }
  return "?";
}

std::string stage_at(const StageLog& log, double t) {
  std::string out;
  for (const auto& m : log) {
    if (m.time <= t) {
      out = m.stage;
    } else {
      break;
    }
  }
  return out;
}

namespace {

struct Band {
  double lo;
  double hi;
};

void scan(const circuit::TimeSeries& ts, std::size_t channel, LimitKind kind, Band band,
          const LimitEnvelope& env, const StageLog& stages, std::vector<Violation>& out) {
  const auto& t = ts.time();
  const auto& x = ts.values(channel);
  const double h = ts.sample_interval();
  const std::string& name = ts.channels()[channel].name;

  struct Entry {
    Violation v;
    double excess = 0.0;
  };
  std::map<std::string, Entry> by_stage;
  std::vector<std::string> order;
  const auto outside = [&](std::size_t i) {
    return t[i] >= env.monitor_from_s && (x[i] < band.lo || x[i] > band.hi);
  };
  std::size_t k = 0;
  while (k < x.size()) {
    if (!outside(k)) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end < x.size() && outside(end)) {
      ++end;
    }
    const double length = static_cast<double>(end - k) * h;
    if (length + 1e-9 >= env.debounce_s) {
      // Each sample counts towards the stage in force at its own time.
      std::size_t j = k;
      while (j < end) {
        const std::string stage = stage_at(stages, t[j]);
        std::size_t piece_end = j + 1;
        while (piece_end < end && stage_at(stages, t[piece_end]) == stage) {
          ++piece_end;
        }
        std::size_t worst_at = j;
        double excess = -1.0;
        for (std::size_t m = j; m < piece_end; ++m) {
          const double e = std::max(band.lo - x[m], x[m] - band.hi);
          if (e > excess) {
            excess = e;
            worst_at = m;
          }
        }
        auto [it, fresh] = by_stage.try_emplace(stage);
        Entry& e = it->second;
        if (fresh) {
          order.push_back(stage);
          e.v.signal = name;
          e.v.kind = kind;
          e.v.start = t[j];
          e.v.stage = stage;
        }
        if (fresh || excess > e.excess) {
          e.excess = excess;
          e.v.worst = x[worst_at];
          e.v.limit = x[worst_at] > band.hi ? band.hi : band.lo;
        }
        e.v.end = t[piece_end - 1];
        ++e.v.excursions;
        e.v.duration_s += static_cast<double>(piece_end - j) * h;
        j = piece_end;
      }
    }
    k = end;
  }
  for (const auto& s : order) {
    out.push_back(by_stage.at(s).v);
  }
}

}  // namespace

ViolationReport check_limits(const circuit::TimeSeries& series, const LimitEnvelope& envelope,
                             const StageLog& stages) {
  envelope.validate();
  const auto lookup = [&](const std::string& name) {
    const auto idx = series.find(name);
    if (!idx) {
      throw MeasureError(fmt::format("limit check: channel '{}' not in the time series", name));
    }
    return *idx;
  };
  ViolationReport report;
  for (const auto& c : envelope.voltage_channels) {
    scan(series, lookup(c), LimitKind::Voltage, {envelope.v_min_pu, envelope.v_max_pu}, envelope, stages,
         report.violations);
  }
  for (const auto& c : envelope.frequency_channels) {
    scan(series, lookup(c), LimitKind::Frequency, {envelope.f_min_hz, envelope.f_max_hz}, envelope, stages,
         report.violations);
  }
  for (const auto& c : envelope.current_channels) {
    scan(series, lookup(c), LimitKind::Current, {-INFINITY, envelope.current_cap_pu}, envelope, stages,
         report.violations);
  }
  std::stable_sort(report.violations.begin(), report.violations.end(), [](const auto& a, const auto& b) {
    return a.start != b.start ? a.start < b.start : a.signal < b.signal;
  });
  return report;
}

}  // namespace blackstart::measure
