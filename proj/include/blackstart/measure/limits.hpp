#pragma once

#include <string>
#include <vector>

#include "blackstart/circuit/timeseries.hpp"

namespace blackstart::measure {

struct LimitEnvelope {
  double v_min_pu = 0.9;
  double v_max_pu = 1.1;
  double f_min_hz = 47.0;
  double f_max_hz = 52.0;
  double current_cap_pu = 1.0;
  double debounce_s = 0.02;      // shorter excursions are ignored
  double monitor_from_s = 0.0;   // samples before this are not checked
  std::vector<std::string> voltage_channels;
  std::vector<std::string> frequency_channels;
  std::vector<std::string> current_channels;

  void validate() const;
  friend bool operator==(const LimitEnvelope&, const LimitEnvelope&) = default;
};

enum class LimitKind { Voltage, Frequency, Current };

const char* to_string(LimitKind kind);

/// Out-of-band behaviour of one signal within one stage. An excursion must
/// last at least the debounce time; its samples are then charged to the
/// stage in force at each sample. `start`/`end` span the first to last such
/// sample, `excursions` counts the pieces and `duration_s` sums them.
struct Violation {
  std::string signal;
  LimitKind kind = LimitKind::Voltage;
  double start = 0.0;
  double end = 0.0;
  double worst = 0.0;
  double limit = 0.0;
  std::string stage;
  std::size_t excursions = 0;
  double duration_s = 0.0;
};

struct ViolationReport {
  std::vector<Violation> violations;  // sorted by start, then signal

  bool empty() const { return violations.empty(); }
  std::size_t count() const { return violations.size(); }
};

struct StageMark {
  double time = 0.0;
  std::string stage;
};
using StageLog = std::vector<StageMark>;

/// Stage in force at time t (the last mark at or before t), or "" if none.
std::string stage_at(const StageLog& log, double t);

/// Checks every channel the envelope names. Entries are keyed by signal and
/// stage, so widening a band can drop entries but never add one.
ViolationReport check_limits(const circuit::TimeSeries& series, const LimitEnvelope& envelope,
                             const StageLog& stages);

}  // namespace blackstart::measure
