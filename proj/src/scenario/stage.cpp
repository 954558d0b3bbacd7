#include "blackstart/scenario/stage.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "blackstart/scenario/case.hpp"

namespace blackstart::scenario {

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::Dead:
      return "Dead";
    case Stage::WindFarmPowerIsland:
      return "WindFarmPowerIsland";
    case Stage::BlackStartPowerIsland:
      return "BlackStartPowerIsland";
    case Stage::PowerIslandReSync:
      return "PowerIslandReSync";
  }
  return "?";
}

Stage target_stage(const Observation& obs) {
  if (obs.tie_closed) {
    return Stage::PowerIslandReSync;
  }
  if (obs.block_load_closed) {
    return Stage::BlackStartPowerIsland;
  }
  if (obs.bess_forming) {
    return Stage::WindFarmPowerIsland;
  }
  return Stage::Dead;
}

bool StageMachine::advance(const Observation& obs) {
  if (block_load_seen_ && !obs.block_load_closed) {
    regressions_.push_back(fmt::format("{:.6f} s: block load breaker open again", obs.time));
    block_load_seen_ = false;
  }
  if (tie_seen_ && !obs.tie_closed) {
    regressions_.push_back(fmt::format("{:.6f} s: tie breaker open again", obs.time));
    tie_seen_ = false;
  }
  block_load_seen_ = block_load_seen_ || obs.block_load_closed;
  tie_seen_ = tie_seen_ || obs.tie_closed;

  const Stage target = target_stage(obs);
  if (static_cast<int>(target) <= static_cast<int>(stage_)) {
    return false;
  }
  // a jump (say Dead straight to a closed block load) still passes through
  // each stage so the log stays a strict sequence
  while (stage_ != target) {
    stage_ = static_cast<Stage>(static_cast<int>(stage_) + 1);
    transitions_.push_back({obs.time, stage_});
  }
  return true;
}

bool synchrocheck_in_band(const PhasorMeasurement& island, const PhasorMeasurement& grid,
                          const SynchrocheckSettings& settings) {
  const double dtheta = std::remainder(island.theta_rad - grid.theta_rad, 2.0 * std::numbers::pi);
  return std::abs(island.f_hz - grid.f_hz) <= settings.max_df_hz &&
         std::abs(island.v_pu - grid.v_pu) <= settings.max_dv_pu &&
         std::abs(dtheta) * 180.0 / std::numbers::pi <= settings.max_dtheta_deg;
}

bool synchrocheck_evaluate(const PhasorMeasurement& island, const PhasorMeasurement& grid,
                           const SynchrocheckSettings& settings, double elapsed_in_band_s) {
  return synchrocheck_in_band(island, grid, settings) && elapsed_in_band_s >= settings.dwell_s;
}

}  // namespace blackstart::scenario
