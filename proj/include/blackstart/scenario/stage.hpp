#pragma once

#include <string>
#include <vector>

namespace blackstart::scenario {

enum class Stage { Dead, WindFarmPowerIsland, BlackStartPowerIsland, PowerIslandReSync };

const char* to_string(Stage stage);

/// What the stage logic sees of the system at one instant.
struct Observation {
  double time = 0.0;
  bool bess_forming = false;       // nonzero BESS voltage command
  bool block_load_closed = false;
  bool tie_closed = false;
};

struct StageTransition {
  double time = 0.0;
  Stage stage = Stage::Dead;
  friend bool operator==(const StageTransition&, const StageTransition&) = default;
};

/// Forward-only restoration stage. Observations that would move it back
/// (a block load trip, say) are noted once and otherwise ignored.
class StageMachine {
 public:
  Stage stage() const { return stage_; }
  const std::vector<StageTransition>& transitions() const { return transitions_; }
  const std::vector<std::string>& regressions() const { return regressions_; }

  /// Returns true if the stage changed.
  bool advance(const Observation& obs);

 private:
  Stage stage_ = Stage::Dead;
  std::vector<StageTransition> transitions_;
  std::vector<std::string> regressions_;
  bool block_load_seen_ = false;
  bool tie_seen_ = false;
};

/// Stage implied by one observation alone.
Stage target_stage(const Observation& obs);

struct PhasorMeasurement {
  double f_hz = 0.0;
  double v_pu = 0.0;
  double theta_rad = 0.0;
};

struct SynchrocheckSettings;

/// True when frequency, voltage and angle differences are all within the
/// settings and `elapsed_in_band_s` has reached the dwell time.
bool synchrocheck_evaluate(const PhasorMeasurement& island, const PhasorMeasurement& grid,
                           const SynchrocheckSettings& settings, double elapsed_in_band_s);

/// Same conditions without the dwell; drives the in-band timer.
bool synchrocheck_in_band(const PhasorMeasurement& island, const PhasorMeasurement& grid,
                          const SynchrocheckSettings& settings);

}  // namespace blackstart::scenario
