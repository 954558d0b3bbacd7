#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "blackstart/cli/scenario_file.hpp"
#include "blackstart/scenario/simulation.hpp"

namespace blackstart::cli {

// The only exit codes the tool emits.
inline constexpr int kExitClean = 0;
inline constexpr int kExitFailure = 1;     // config, parse or solver error
inline constexpr int kExitViolations = 2;  // run completed outside the limits

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command-line settings. Unset overrides leave the scenario's run.* values.
struct RunConfig {
  std::string scenario = "default-blackstart";  // built-in name or file path
  std::optional<double> dt_s;
  std::optional<double> duration_s;
  std::optional<std::size_t> decimation;
  std::filesystem::path out_dir = "out";
  bool no_saturation = false;
  bool current_limiter = false;
  bool enable_resync = false;
};

/// Loads the scenario and applies the overrides. Re-sync enables the grid
/// equivalent and arms the synchrocheck 2 s after the last event unless the
/// schedule already does. Throws ConfigError for bad overrides (checked
/// before the scenario is read) and ScenarioError for a bad scenario.
ScenarioFile resolve(const RunConfig& config);

// File renderings; all deterministic for a given result.
std::string format_timeseries_csv(const circuit::TimeSeries& series);
std::string format_violations(const measure::ViolationReport& report);
std::string format_stages(const std::vector<scenario::StageTransition>& stages);
std::string format_events(const std::vector<scenario::LoggedEvent>& events);
std::string format_summary(const scenario::Summary& summary);

/// Input echo in scenario-file form, preceded by comment lines with the
/// version, wall time, exit code and warnings. Passing the manifest back as
/// --scenario repeats the run.
std::string format_manifest(const ScenarioFile& input, const scenario::SimulationResult& result,
                            double wall_time_s, int exit_code);

int exit_code_for(const scenario::SimulationResult& result);

/// Writes timeseries.csv, violations.txt, stages.txt, events.txt,
/// summary.txt and manifest.txt into `dir`, creating it if needed.
void write_run(const std::filesystem::path& dir, const ScenarioFile& input,
               const scenario::SimulationResult& result, double wall_time_s);

/// `run`: never throws; diagnostics go to `log`.
int run(const RunConfig& config, std::ostream& log);

struct ChannelDelta {
  std::string name;
  std::string unit;
  double peak_a = 0.0;  // largest magnitude
  double peak_b = 0.0;
  double steady_a = 0.0;  // mean over the final window
  double steady_b = 0.0;
};

struct ComparisonReport {
  std::string name_a;
  std::string name_b;
  double t_begin = 0.0;
  double t_end = 0.0;
  double interval = 0.0;
  std::vector<std::string> notes;
  std::vector<ChannelDelta> channels;

  // Headline: BESS current peak during energisation and worst RMS voltage
  // deviation from 1 pu over the monitored part of each run.
  double peak_bess_i_a = 0.0;
  double peak_bess_i_b = 0.0;
  double worst_v_a = 0.0;
  double worst_v_b = 0.0;

  double peak_ratio() const { return peak_bess_i_a / peak_bess_i_b; }
};

/// Per-channel comparison over the overlapping time span. Runs sampled at
/// different intervals are linearly resampled onto the coarser grid, which
/// is noted in the report. Throws ConfigError if the channel sets differ.
ComparisonReport compare(const scenario::SimulationResult& a, const scenario::SimulationResult& b,
                         double steady_window_s = 0.2);

std::string format_comparison(const ComparisonReport& report);

/// `compare`: runs both legs concurrently, writes each leg under
/// `out_dir/a` and `out_dir/b` and the report to `out_dir/comparison.txt`.
int compare_runs(const RunConfig& a, const RunConfig& b, const std::filesystem::path& out_dir,
                 std::ostream& log);

/// Short build identifier written to manifests.
const char* version();

}  // namespace blackstart::cli
