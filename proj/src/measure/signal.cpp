#include "blackstart/measure/signal.hpp"

#include <cmath>

#include <fmt/format.h>

#include "blackstart/kernels/kernels.hpp"

namespace blackstart::measure {

std::size_t cycle_samples(double dt, double fundamental_hz) {
  if (!(dt > 0.0)) {
    throw MeasureError("time step must be positive");
  }
  return static_cast<std::size_t>(std::llround(1.0 / (fundamental_hz * dt)));
}

double rms_one_cycle(std::span<const double> samples, double dt, double base) {
  const std::size_t n = cycle_samples(dt);
  if (samples.size() < n || n == 0) {
    throw MeasureError(fmt::format("rms window of {} samples is shorter than one cycle ({})",
                                   samples.size(), n));
  }
  double s = 0.0;
  for (const double x : samples.last(n)) {
    s += x * x;
  }
  return std::sqrt(s / static_cast<double>(n)) / base;
}

SlidingMean::SlidingMean(std::size_t window) : buffer_(window, 0.0) {
  if (window == 0) {
    throw MeasureError("averaging window must be at least one sample");
  }
}

double SlidingMean::push(double x) {
  sum_ += x - buffer_[next_];
  buffer_[next_] = x;
  if (++next_ == buffer_.size()) {
    next_ = 0;
    sum_ = 0.0;
    for (const double v : buffer_) {
      sum_ += v;
    }
  }
  return value();
}

double SlidingRms3::push(const std::array<double, 3>& abc) {
  mean_.push((abc[0] * abc[0] + abc[1] * abc[1] + abc[2] * abc[2]) / 3.0);
  return value();
}

double SlidingRms3::value() const { return std::sqrt(std::max(mean_.value(), 0.0)); }

PowerPair instantaneous_pq(const std::array<double, 3>& v, const std::array<double, 3>& i) {
  return {v[0] * i[0] + v[1] * i[1] + v[2] * i[2],
          ((v[1] - v[2]) * i[0] + (v[2] - v[0]) * i[1] + (v[0] - v[1]) * i[2]) / std::sqrt(3.0)};
}

PowerPair PqAverager::push(const PowerPair& s) {
  p_.push(s.p);
  q_.push(s.q);
  return value();
}

double estimate_frequency(std::span<const double> signal, double dt) {
  double first = -1.0;
  double last = -1.0;
  std::size_t count = 0;
  for (std::size_t k = 1; k < signal.size(); ++k) {
    if (signal[k - 1] < 0.0 && signal[k] >= 0.0) {
      const double t = (static_cast<double>(k - 1) + signal[k - 1] / (signal[k - 1] - signal[k])) * dt;
      if (count == 0) {
        first = t;
      }
      last = t;
      ++count;
    }
  }
  if (count < 2) {
    throw MeasureError("fewer than two zero crossings in the frequency window");
  }
  return static_cast<double>(count - 1) / (last - first);
}

ZeroCrossingFrequency::ZeroCrossingFrequency(double dt, double initial_hz, std::size_t periods)
    : dt_(dt), value_(initial_hz), periods_(periods), crossings_(periods + 1, 0.0) {
  if (!(dt > 0.0) || periods == 0) {
    throw MeasureError("zero-crossing meter needs dt > 0 and at least one period");
  }
}

double ZeroCrossingFrequency::push(double x) {
  if (n_ > 0 && prev_ < 0.0 && x >= 0.0) {
    const double t = (static_cast<double>(n_ - 1) + prev_ / (prev_ - x)) * dt_;
    const std::size_t slots = crossings_.size();
    crossings_[seen_ % slots] = t;
    ++seen_;
    if (seen_ > periods_) {
      const double oldest = crossings_[(seen_ - 1 - periods_) % slots];
      value_ = static_cast<double>(periods_) / (t - oldest);
    }
  }
  prev_ = x;
  ++n_;
  return value_;
}

double thd(std::span<const double> signal, double dt, double fundamental_hz, std::size_t max_harmonic) {
  const double cycles_exact = static_cast<double>(signal.size()) * dt * fundamental_hz;
  const double cycles = std::round(cycles_exact);
  if (cycles < 1.0 || std::abs(cycles_exact - cycles) > 1e-6 * cycles) {
    throw MeasureError(fmt::format("thd window holds {:.6f} cycles; it must be a whole number",
                                   cycles_exact));
  }
  const auto h = kernels::omp::harmonic_magnitudes(signal, static_cast<std::size_t>(cycles), max_harmonic);
  if (h[1] == 0.0) {
    throw MeasureError("thd undefined: no fundamental component");
  }
  double sum = 0.0;
  for (std::size_t k = 2; k < h.size(); ++k) {
    sum += h[k] * h[k];
  }
  return std::sqrt(sum) / h[1];
}

}  // namespace blackstart::measure
