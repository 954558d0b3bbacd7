#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "blackstart/circuit/timeseries.hpp"
#include "blackstart/measure/limits.hpp"
#include "blackstart/scenario/case.hpp"
#include "blackstart/scenario/schedule.hpp"
#include "blackstart/scenario/stage.hpp"

namespace blackstart::scenario {

/// Something that happened during a run: a scheduled action taking effect,
/// a converter deblocking, or the synchrocheck closing the tie.
struct LoggedEvent {
  double time = 0.0;
  std::string what;
  std::string target;

  friend bool operator==(const LoggedEvent&, const LoggedEvent&) = default;
};

/// Named scalar results in a fixed order.
class Summary {
 public:
  void set(std::string key, double value);
  double get(std::string_view key) const;  // throws std::out_of_range
  bool has(std::string_view key) const;
  const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

struct SimulationResult {
  std::string case_name;
  circuit::TimeSeries series;
  std::vector<StageTransition> stages;
  std::vector<LoggedEvent> events;
  measure::ViolationReport violations;
  Summary summary;
  std::vector<std::string> warnings;
};

/// Stage transitions in the form the limit checker takes.
measure::StageLog stage_log(const std::vector<StageTransition>& transitions);

/// Runs the case under the schedule using the case's run settings. Throws
/// ScenarioError for an invalid case or schedule and circuit errors if the
/// solver fails.
SimulationResult simulate(const CaseDefinition& c, const EventSchedule& schedule);

struct SimulationJob {
  CaseDefinition definition;
  EventSchedule schedule;
};

/// Independent runs spread over OpenMP threads; results are in job order
/// and identical to calling simulate() on each. The first failure is
/// rethrown after every job has finished.
std::vector<SimulationResult> simulate_all(const std::vector<SimulationJob>& jobs);

/// Reference for simulate_all: the same jobs one after another.
std::vector<SimulationResult> simulate_all_serial(const std::vector<SimulationJob>& jobs);

}  // namespace blackstart::scenario
