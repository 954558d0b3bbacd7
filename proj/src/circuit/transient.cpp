#include "blackstart/circuit/transient.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace blackstart::circuit {

std::int64_t snap_to_step(double time, double dt) {
  return static_cast<std::int64_t>(std::llround(time / dt));
}

std::int64_t step_count(double duration, double dt) {
  if (!(dt > 0.0)) {
    throw CircuitError("time step must be positive");
  }
  if (!(duration >= 0.0)) {
    throw CircuitError("duration must not be negative");
  }
  const double ratio = duration / dt;
  const auto steps = static_cast<std::int64_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-6 * std::max(1.0, ratio)) {
    throw CircuitError(fmt::format("duration {} s is not a multiple of dt {} s", duration, dt));
  }
  return steps;
}

std::vector<Probe> node_voltage_probes(const Network& network) {
  std::vector<Probe> probes;
  static constexpr char kPhase[3] = {'a', 'b', 'c'};
  for (const auto& node : network.nodes()) {
    if (node.id == kGround) {
      continue;
    }
    for (std::size_t p = 0; p < 3; ++p) {
      const NodeId id = node.id;
      probes.push_back({{fmt::format("{}.v{}", node.name, kPhase[p]), "V", node.name},
                        [id, p](const Engine& e) { return e.node_voltage(id)[p]; }});
    }
  }
  return probes;
}

TimeSeries run_transient(Engine& engine, std::span<const SwitchEvent> events, double duration,
                         std::span<const Probe> probes, const TransientHooks& hooks,
                         std::size_t decimation) {
  if (decimation == 0) {
    throw CircuitError("decimation must be at least 1");
  }
  const std::int64_t steps = step_count(duration, engine.dt());

  std::vector<std::pair<std::int64_t, const SwitchEvent*>> queue;
  for (const auto& ev : events) {
    queue.emplace_back(snap_to_step(ev.time, engine.dt()), &ev);
  }
  std::stable_sort(queue.begin(), queue.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  std::vector<Channel> channels;
  for (const auto& p : probes) {
    channels.push_back(p.channel);
  }
  TimeSeries series(std::move(channels));
  std::vector<double> row(probes.size());
  const auto sample = [&] {
    for (std::size_t k = 0; k < probes.size(); ++k) {
      row[k] = probes[k].read(engine);
    }
    series.append(engine.time(), row);
  };

  const std::int64_t start = engine.step_index();
  sample();
  std::size_t next_event = 0;
  for (std::int64_t n = 0; n < steps; ++n) {
    const std::int64_t index = start + n;
    while (next_event < queue.size() && queue[next_event].first <= index) {
      const auto* ev = queue[next_event].second;
      engine.apply_switch_event(ev->breaker_id, ev->close);
      ++next_event;
    }
    if (hooks.before_solve) {
      hooks.before_solve(engine);
    }
    engine.step();
    if (hooks.after_solve) {
      hooks.after_solve(engine);
    }
    if ((n + 1) % static_cast<std::int64_t>(decimation) == 0) {
      sample();
    }
  }
  return series;
}

}  // namespace blackstart::circuit
