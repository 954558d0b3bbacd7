#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "blackstart/circuit/engine.hpp"
#include "blackstart/circuit/timeseries.hpp"

namespace blackstart::circuit {

struct SwitchEvent {
  double time = 0.0;
  std::string breaker_id;
  bool close = true;
};

/// A recorded signal and how to read it from the engine after a solve.
struct Probe {
  Channel channel;
  std::function<double(const Engine&)> read;
};

/// Per-step callbacks. `before_solve` runs once per step after that step's
/// switch events and before the linear solve (controllers write source
/// setpoints here); `after_solve` runs once the new state is available.
struct TransientHooks {
  std::function<void(Engine&)> before_solve;
  std::function<void(const Engine&)> after_solve;
};

/// Step index an event time snaps to (nearest step boundary).
std::int64_t snap_to_step(double time, double dt);

/// Number of steps covering `duration`; throws if it is not a multiple of dt.
std::int64_t step_count(double duration, double dt);

/// Phase voltages of every busbar, named "<node>.v<phase>".
std::vector<Probe> node_voltage_probes(const Network& network);

/// Runs `engine` for `duration` seconds, applying breaker events at their
/// snapped step and sampling `probes` at t = 0 and every `decimation` steps.
/// Identical inputs give bit-identical output.
TimeSeries run_transient(Engine& engine, std::span<const SwitchEvent> events, double duration,
                         std::span<const Probe> probes, const TransientHooks& hooks = {},
                         std::size_t decimation = 1);

}  // namespace blackstart::circuit
