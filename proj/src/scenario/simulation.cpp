#include "blackstart/scenario/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "blackstart/circuit/engine.hpp"
#include "blackstart/circuit/transient.hpp"
#include "blackstart/converters/dq.hpp"
#include "blackstart/measure/signal.hpp"

namespace blackstart::scenario {

using circuit::Engine;
using circuit::Phases;
using converters::Abc;
using converters::PerUnitBase;

void Summary::set(std::string key, double value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(std::move(key), value);
}

double Summary::get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) {
      return v;
    }
  }
  throw std::out_of_range(fmt::format("summary has no '{}'", key));
}

bool Summary::has(std::string_view key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
}

measure::StageLog stage_log(const std::vector<StageTransition>& transitions) {
  measure::StageLog log;
  for (const auto& t : transitions) {
    log.push_back({t.time, to_string(t.stage)});
  }
  return log;
}

namespace {

constexpr double kReadinessWindowS = 2.0 * 3600.0;
constexpr double kExportReactiveMvar = 100.0;
// Island frequency meter window. The controller frequency follows the
// one-cycle power average, so each cable energisation shows in it as a
// one-cycle spike; the bus voltage phase barely moves.
constexpr std::size_t kIslandFrequencyPeriods = 5;

Abc scaled(const Phases& x, double divisor) { return {x[0] / divisor, x[1] / divisor, x[2] / divisor}; }

Phases volts(const Abc& pu, double peak) { return {pu[0] * peak, pu[1] * peak, pu[2] * peak}; }

Phases negated(const Phases& x) { return {-x[0], -x[1], -x[2]}; }

double max_abs(const Phases& x) { return std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])}); }

double phase_rms_base(double kv) { return kv * 1e3 / std::sqrt(3.0); }

// Phase-peak current base of a transformer on its core side.
double core_current_base(const circuit::TwoWindingTransformer& tx) {
  const double kv = tx.core_side == circuit::CoreSide::Hv ? tx.v_hv_kv : tx.v_lv_kv;
  return std::sqrt(2.0) * tx.s_rated_mva * 1e6 / (std::sqrt(3.0) * kv * 1e3);
}

struct WtRuntime {
  const WtPlacement* placement = nullptr;
  std::size_t source = 0;
  circuit::NodeId lv = 0;
  circuit::NodeId hv = 0;
  converters::GflWtState state;
  bool breaker_closed = false;
  double deblock_at = std::numeric_limits<double>::infinity();
  std::size_t clamp_steps = 0;
  measure::SlidingRms3 i_rms;
  measure::PqAverager pq;

  WtRuntime(std::size_t window) : i_rms(window), pq(window) {}
};

struct TransformerPeak {
  std::string id;
  std::size_t element = 0;
  double base_a = 1.0;
  double peak_pu = 0.0;
};

class Driver {
 public:
  Driver(const CaseDefinition& c, const EventSchedule& schedule);
  SimulationResult run();

 private:
  std::size_t element(std::string_view id) const { return net_.element_index(id); }
  void before_solve(Engine& engine);
  void after_solve(const Engine& engine);
  void apply_actions(Engine& engine);
  void control_bess(Engine& engine);
  void control_wts(Engine& engine);
  void control_grid(Engine& engine);
  double soft_charge_scale(double t) const;
  std::vector<circuit::Probe> probes();

  const CaseDefinition& case_;
  const EventSchedule& schedule_;
  circuit::Network net_;
  double dt_;
  std::size_t window_;

  // BESS
  converters::GfmBessParams bess_params_;
  PerUnitBase bess_base_;
  std::size_t bess_source_;
  std::size_t bess_tx_;
  circuit::NodeId poc_;
  converters::GfmBessState bess_;
  measure::SlidingRms3 poc_v_rms_;
  measure::SlidingRms3 bess_i_rms_;
  measure::PqAverager poc_pq_;
  measure::ZeroCrossingFrequency poc_f_;
  double bess_i_peak_pu_ = 0.0;
  double bess_i_peak_energisation_pu_ = 0.0;
  double bess_i_rms_peak_pu_ = 0.0;
  double energisation_end_ = std::numeric_limits<double>::infinity();
  Phases poc_voltage_{};

  // other buses
  circuit::NodeId bus_66_;
  circuit::NodeId offshore_;
  circuit::NodeId onshore_400_;
  measure::SlidingRms3 v66_rms_;
  measure::SlidingRms3 offshore_rms_;
  measure::SlidingRms3 onshore_400_rms_;

  std::vector<WtRuntime> wts_;
  std::vector<TransformerPeak> transformers_;

  // schedule bookkeeping
  std::vector<std::int64_t> action_steps_;
  std::size_t next_action_ = 0;
  std::optional<double> ramp_start_;
  std::optional<double> ramp_end_;

  // external grid
  std::optional<std::size_t> grid_source_;
  circuit::NodeId grid_node_ = 0;
  bool synchro_armed_ = false;
  bool tie_closed_ = false;
  double in_band_s_ = 0.0;
  measure::SlidingRms3 grid_rms_;
  measure::ZeroCrossingFrequency island_f_;
  measure::ZeroCrossingFrequency grid_f_;

  StageMachine stages_;
  std::vector<LoggedEvent> log_;
};

Driver::Driver(const CaseDefinition& c, const EventSchedule& schedule)
    : case_(c),
      schedule_(schedule),
      net_(build_network(c, {c.run.saturation})),
      dt_(c.run.dt_s),
      window_(measure::cycle_samples(c.run.dt_s)),
      bess_params_(c.bess.params),
      bess_base_(c.bess.params.base()),
      bess_source_(net_.element_index(c.bess.source_id())),
      bess_tx_(net_.element_index(c.bess.transformer)),
      poc_(net_.node_id(c.bess.poc_node)),
      poc_v_rms_(window_),
      bess_i_rms_(window_),
      poc_pq_(window_),
      poc_f_(c.run.dt_s, measure::kFundamentalHz, kIslandFrequencyPeriods),
      bus_66_(net_.node_id("bus_66")),
      offshore_(net_.node_id("offshore_220")),
      onshore_400_(net_.node_id("onshore_400")),
      v66_rms_(window_),
      offshore_rms_(window_),
      onshore_400_rms_(window_),
      grid_rms_(window_),
      island_f_(c.run.dt_s),
      grid_f_(c.run.dt_s) {
  if (c.run.current_limiter) {
    bess_params_.current_limit_pu = c.run.current_limit_pu;
  }
  bess_.p_ref_mw = c.bess.p_ref_initial_mw;

  for (const auto& wt : c.wts) {
    WtRuntime rt(window_);
    rt.placement = &wt;
    rt.source = net_.element_index(wt.source_id());
    rt.lv = net_.node_id(wt.terminal_node);
    rt.hv = net_.node_id(wt.hv_node);
    wts_.push_back(std::move(rt));
  }
  for (const auto& e : c.elements) {
    if (const auto* tx = std::get_if<circuit::TwoWindingTransformer>(&e.kind)) {
      transformers_.push_back({e.id, net_.element_index(e.id), core_current_base(*tx), 0.0});
    }
  }
  for (const auto& ev : schedule.events) {
    action_steps_.push_back(circuit::snap_to_step(ev.time, dt_));
    if (ev.action == Action::SoftChargeStart && !ramp_start_) {
      ramp_start_ = ev.time;
    } else if (ev.action == Action::SoftChargeEnd && !ramp_end_) {
      ramp_end_ = ev.time;
    } else if (ev.action == Action::EnableWT || ev.action == Action::EnergiseBlockLoad) {
      energisation_end_ = std::min(energisation_end_, ev.time);
    }
  }
  bess_.soft_charge_scale = soft_charge_scale(0.0);  // so the t = 0 row is right
  if (c.grid.enabled) {
    grid_source_ = net_.element_index(c.grid.source_id());
    grid_node_ = net_.node_id(c.grid.node);
  }
}

double Driver::soft_charge_scale(double t) const {
  if (!ramp_start_) {
    return 1.0;
  }
  if (t < *ramp_start_) {
    return 0.0;
  }
  const double ramp = ramp_end_ && *ramp_end_ > *ramp_start_ ? *ramp_end_ - *ramp_start_ : 0.5;
  return converters::soft_charge_reference(t - *ramp_start_, ramp);
}

void Driver::apply_actions(Engine& engine) {
  const std::int64_t now = engine.step_index();
  while (next_action_ < schedule_.events.size() && action_steps_[next_action_] <= now) {
    const Event& ev = schedule_.events[next_action_++];
    const double t = engine.time();
    switch (ev.action) {
      case Action::SoftChargeStart:
      case Action::SoftChargeEnd:
        log_.push_back({t, to_string(ev.action), ""});
        break;
      case Action::EnableWT: {
        for (auto& wt : wts_) {
          if (wt.placement->id == ev.target) {
            wt.breaker_closed = true;
            wt.deblock_at = t + case_.run.wt_deblock_delay_s;
          }
        }
        log_.push_back({t, to_string(ev.action), ev.target});
        break;
      }
      case Action::CloseBreaker:
      case Action::EnergiseBlockLoad: {
        const std::string& breaker = ev.action == Action::CloseBreaker ? ev.target : case_.block_load.breaker;
        log_.push_back({t, to_string(ev.action), breaker});
        break;
      }
      case Action::SetBessPRef:
        bess_.p_ref_mw = ev.value_mw;
        log_.push_back({t, to_string(ev.action), fmt::format("{:g} MW", ev.value_mw)});
        break;
      case Action::SynchrocheckArm:
        synchro_armed_ = true;
        in_band_s_ = 0.0;
        log_.push_back({t, to_string(ev.action), case_.grid.tie_breaker});
        break;
    }
  }
}

void Driver::control_bess(Engine& engine) {
  const double t_next = engine.time() + dt_;
  bess_.soft_charge_scale = soft_charge_scale(t_next);
  converters::GfmInputs in;
  in.v_rms_pu = poc_v_rms_.value() / phase_rms_base(case_.find_node(case_.bess.poc_node)->kv);
  in.p_meas_mw = poc_pq_.value().p / 1e6;
  if (bess_params_.current_limit_pu) {
    const Abc i = scaled(engine.source_current(bess_source_), bess_base_.i_peak());
    in.i_magnitude_pu = converters::magnitude(converters::park(i, bess_.theta));
  }
  const auto out = converters::gfm_controller_step(in, bess_, bess_params_, dt_);
  bess_ = out.state;
  engine.set_voltage_source(bess_source_, volts(out.v_abc_pu, bess_base_.v_peak()));
}

void Driver::control_wts(Engine& engine) {
  const auto& params = case_.wt_params;
  const PerUnitBase base = params.base();
  const double hv_peak = PerUnitBase{params.s_rated_mva(), params.transformer_hv_kv}.v_peak();
  const double t = engine.time();
  for (auto& wt : wts_) {
    if (!wt.breaker_closed) {
      continue;
    }
    converters::GflWtInputs in;
    in.v_terminal_pu = scaled(engine.node_voltage(wt.lv), base.v_peak());
    in.i_pu = scaled(engine.source_current(wt.source), base.i_peak());
    in.v_hv_pu = scaled(engine.node_voltage(wt.hv), hv_peak);
    if (!wt.state.enabled && t + 0.5 * dt_ >= wt.deblock_at) {
      wt.state = converters::gfl_wt_enable(in, t);
      engine.set_source_enabled(wt.source, true);
      engine.set_voltage_source(wt.source, engine.node_voltage(wt.lv));
      log_.push_back({t, "deblock", wt.placement->id});
    }
    if (!wt.state.enabled) {
      continue;
    }
    const auto out = converters::gfl_wt_step(in, wt.state, params, dt_);
    wt.state = out.state;
    wt.clamp_steps += out.clamped ? 1 : 0;
    engine.set_voltage_source(wt.source, volts(out.v_abc_pu, base.v_peak()));
  }
}

void Driver::control_grid(Engine& engine) {
  if (!grid_source_) {
    return;
  }
  const double t_next = engine.time() + dt_;
  const double peak = case_.grid.kv * 1e3 * std::sqrt(2.0 / 3.0);
  engine.set_voltage_source(*grid_source_, volts(converters::inverse_park({1.0, 0.0}, converters::kOmega0 * t_next), peak));
  if (!synchro_armed_ || tie_closed_) {
    return;
  }
  const double base = phase_rms_base(case_.grid.kv);
  const double v_peak = base * std::sqrt(2.0);
  const auto angle = [&](circuit::NodeId node) {
    const auto dq = converters::park(scaled(engine.node_voltage(node), v_peak), 0.0);
    return std::atan2(dq.q, dq.d);
  };
  const PhasorMeasurement island{island_f_.value(), onshore_400_rms_.value() / base, angle(onshore_400_)};
  const PhasorMeasurement grid{grid_f_.value(), grid_rms_.value() / base, angle(grid_node_)};
  in_band_s_ = synchrocheck_in_band(island, grid, case_.synchrocheck) ? in_band_s_ + dt_ : 0.0;
  if (synchrocheck_evaluate(island, grid, case_.synchrocheck, in_band_s_)) {
    engine.apply_switch_event(case_.grid.tie_breaker, true);
    tie_closed_ = true;
    log_.push_back({engine.time(), "synchrocheck_close", case_.grid.tie_breaker});
  }
}

void Driver::before_solve(Engine& engine) {
  apply_actions(engine);
  control_bess(engine);
  control_wts(engine);
  control_grid(engine);
  Observation obs;
  obs.time = engine.time();
  obs.bess_forming = bess_.soft_charge_scale > 0.0;
  obs.block_load_closed = engine.breaker_closed(case_.block_load.breaker);
  obs.tie_closed = case_.grid.enabled && engine.breaker_closed(case_.grid.tie_breaker);
  stages_.advance(obs);
}

void Driver::after_solve(const Engine& engine) {
  const double t = engine.time();
  poc_voltage_ = engine.node_voltage(poc_);
  const Phases i_supply = negated(engine.terminal_current(bess_tx_, circuit::Terminal::From));
  poc_v_rms_.push(poc_voltage_);
  poc_pq_.push(measure::instantaneous_pq(poc_voltage_, i_supply));
  poc_f_.push(poc_voltage_[0]);

  const Phases i_conv = engine.source_current(bess_source_);
  const double i_pu = max_abs(i_conv) / bess_base_.i_peak();
  bess_i_peak_pu_ = std::max(bess_i_peak_pu_, i_pu);
  if (t <= energisation_end_) {
    bess_i_peak_energisation_pu_ = std::max(bess_i_peak_energisation_pu_, i_pu);
  }
  bess_i_rms_.push(i_conv);
  bess_i_rms_peak_pu_ =
      std::max(bess_i_rms_peak_pu_, bess_i_rms_.value() / (bess_base_.i_peak() / std::sqrt(2.0)));

  v66_rms_.push(engine.node_voltage(bus_66_));
  offshore_rms_.push(engine.node_voltage(offshore_));
  const Phases v400 = engine.node_voltage(onshore_400_);
  onshore_400_rms_.push(v400);

  for (auto& wt : wts_) {
    if (!wt.breaker_closed) {
      continue;
    }
    const Phases i = engine.source_current(wt.source);
    wt.i_rms.push(i);
    wt.pq.push(measure::instantaneous_pq(engine.node_voltage(wt.lv), i));
  }
  for (auto& tx : transformers_) {
    tx.peak_pu = std::max(tx.peak_pu, max_abs(engine.magnetizing_current(tx.element)) / tx.base_a);
  }
  if (synchro_armed_ && !tie_closed_) {
    island_f_.push(v400[0]);
    const Phases vg = engine.node_voltage(grid_node_);
    grid_f_.push(vg[0]);
    grid_rms_.push(vg);
  }
}

std::vector<circuit::Probe> Driver::probes() {
  std::vector<circuit::Probe> out;
  const auto add = [&](std::string name, std::string unit, std::string ref, std::function<double(const Engine&)> fn) {
    out.push_back({{std::move(name), std::move(unit), std::move(ref)}, std::move(fn)});
  };
  const double poc_base = phase_rms_base(case_.find_node(case_.bess.poc_node)->kv);
  const double i_rms_base = bess_base_.i_peak() / std::sqrt(2.0);
  add("bess_v_rms", "pu", case_.bess.poc_node, [this, poc_base](const Engine&) { return poc_v_rms_.value() / poc_base; });
  add("bess_i_rms", "pu", case_.bess.source_id(),
      [this, i_rms_base](const Engine&) { return bess_i_rms_.value() / i_rms_base; });
  add("bess_p", "MW", case_.bess.poc_node, [this](const Engine&) { return poc_pq_.value().p / 1e6; });
  add("bess_q", "Mvar", case_.bess.poc_node, [this](const Engine&) { return poc_pq_.value().q / 1e6; });
  add("bess_f", "Hz", case_.bess.source_id(),
      [this](const Engine&) { return bess_.omega / (2.0 * std::numbers::pi); });
  add("island_f", "Hz", case_.bess.poc_node, [this](const Engine&) { return poc_f_.value(); });
  add("bess_vd", "pu", case_.bess.source_id(), [this](const Engine&) { return bess_.v_d; });
  add("bess_scale", "-", case_.bess.source_id(), [this](const Engine&) { return bess_.soft_charge_scale; });
  static constexpr char kPhase[3] = {'a', 'b', 'c'};
  for (std::size_t p = 0; p < 3; ++p) {
    add(fmt::format("poc_v{}", kPhase[p]), "kV", case_.bess.poc_node,
        [this, p](const Engine&) { return poc_voltage_[p] / 1e3; });
  }
  for (std::size_t p = 0; p < 3; ++p) {
    add(fmt::format("bess_i{}", kPhase[p]), "kA", case_.bess.source_id(),
        [this, p](const Engine& e) { return e.source_current(bess_source_)[p] / 1e3; });
  }
  add("v66_rms", "pu", "bus_66", [this](const Engine&) { return v66_rms_.value() / phase_rms_base(66.0); });
  add("offshore_v_rms", "pu", "offshore_220",
      [this](const Engine&) { return offshore_rms_.value() / phase_rms_base(220.0); });
  add("onshore_400_v_rms", "pu", "onshore_400",
      [this](const Engine&) { return onshore_400_rms_.value() / phase_rms_base(400.0); });
  const double wt_i_base = case_.wt_params.base().i_peak() / std::sqrt(2.0);
  for (std::size_t k = 0; k < wts_.size(); ++k) {
    const std::string& id = wts_[k].placement->id;
    const std::string src = wts_[k].placement->source_id();
    add(id + "_p", "MW", src, [this, k](const Engine&) { return wts_[k].pq.value().p / 1e6; });
    add(id + "_q", "Mvar", src, [this, k](const Engine&) { return wts_[k].pq.value().q / 1e6; });
    add(id + "_i_rms", "pu", src, [this, k, wt_i_base](const Engine&) { return wts_[k].i_rms.value() / wt_i_base; });
    add(id + "_f", "Hz", src,
        [this, k](const Engine&) { return wts_[k].state.pll.omega / (2.0 * std::numbers::pi); });
    add(id + "_id_ref", "pu", src, [this, k](const Engine&) { return wts_[k].state.id_ref; });
    add(id + "_iq_ref", "pu", src, [this, k](const Engine&) { return wts_[k].state.iq_ref; });
    add(id + "_v_hv", "pu", wts_[k].placement->hv_node,
        [this, k](const Engine&) { return wts_[k].state.v_meas_filtered; });
  }
  for (std::size_t k = 0; k < transformers_.size(); ++k) {
    if (transformers_[k].id == case_.bess.transformer) {
      continue;
    }
    add(transformers_[k].id + "_imag", "pu", transformers_[k].id, [this, k](const Engine& e) {
      return max_abs(e.magnetizing_current(transformers_[k].element)) / transformers_[k].base_a;
    });
  }
  add("stage", "-", "", [this](const Engine&) { return static_cast<double>(stages_.stage()); });
  return out;
}

SimulationResult Driver::run() {
  std::vector<circuit::SwitchEvent> switches;
  for (const auto& ev : schedule_.events) {
    if (ev.action == Action::CloseBreaker) {
      switches.push_back({ev.time, ev.target, true});
    } else if (ev.action == Action::EnergiseBlockLoad) {
      switches.push_back({ev.time, case_.block_load.breaker, true});
    } else if (ev.action == Action::EnableWT) {
      switches.push_back({ev.time, case_.find_wt(ev.target)->breaker, true});
    }
  }

  Engine engine(net_, dt_);
  for (const auto& wt : wts_) {
    engine.set_source_enabled(wt.source, false);
  }
  const auto channel_probes = probes();
  circuit::TransientHooks hooks;
  hooks.before_solve = [this](Engine& e) { before_solve(e); };
  hooks.after_solve = [this](const Engine& e) { after_solve(e); };

  SimulationResult result;
  result.case_name = case_.name;
  result.series =
      circuit::run_transient(engine, switches, case_.run.duration_s, channel_probes, hooks, case_.run.decimation);
  result.stages = stages_.transitions();
  result.events = log_;
  result.violations = measure::check_limits(result.series, case_.envelope, stage_log(result.stages));

  result.warnings = engine.warnings();
  for (const auto& r : stages_.regressions()) {
    result.warnings.push_back("stage regression at " + r);
  }
  std::size_t clamp_steps = 0;
  for (const auto& wt : wts_) {
    clamp_steps += wt.clamp_steps;
    if (wt.clamp_steps > 0) {
      result.warnings.push_back(
          fmt::format("{}: current reference clamped to rating on {} steps", wt.placement->id, wt.clamp_steps));
    }
  }
  if (bess_.limiter_active) {
    result.warnings.push_back("bess current limiter active at the end of the run");
  }

  Summary& s = result.summary;
  s.set("steps", static_cast<double>(engine.step_index()));
  s.set("factorizations", static_cast<double>(engine.factorization_count()));
  s.set("peak_bess_i_pu", bess_i_peak_pu_);
  s.set("peak_bess_i_energisation_pu", bess_i_peak_energisation_pu_);
  s.set("peak_bess_i_rms_pu", bess_i_rms_peak_pu_);
  double peak_imag = 0.0;
  for (const auto& tx : transformers_) {
    s.set("peak_imag_pu." + tx.id, tx.peak_pu);
    peak_imag = std::max(peak_imag, tx.peak_pu);
  }
  s.set("peak_transformer_imag_pu", peak_imag);
  for (const char* name : {"bess_v_rms", "bess_i_rms", "bess_p", "bess_q", "bess_f"}) {
    s.set(fmt::format("final_{}", name), result.series.values(name).back());
  }
  {
    const auto& time = result.series.time();
    const auto& v = result.series.values("bess_v_rms");
    double worst = 0.0;
    for (std::size_t k = 0; k < time.size(); ++k) {
      if (time[k] >= case_.envelope.monitor_from_s) worst = std::max(worst, std::abs(v[k] - 1.0));
    }
    s.set("worst_bess_v_excursion_pu", worst);
  }

  // levels either side of the block load, one second averages
  for (const auto& ev : schedule_.events) {
    if (ev.action != Action::EnergiseBlockLoad) {
      continue;
    }
    const auto& time = result.series.time();
    const auto& i = result.series.values("bess_i_rms");
    const auto& p = result.series.values("bess_p");
    const auto mean_between = [&](const std::vector<double>& x, double t0, double t1) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t k = 0; k < time.size(); ++k) {
        if (time[k] >= t0 && time[k] < t1) {
          sum += x[k];
          ++n;
        }
      }
      return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
    };
    const double end = time.back();
    s.set("block_load_i_pre_pu", mean_between(i, ev.time - 1.0, ev.time));
    s.set("block_load_i_post_pu", mean_between(i, end - 1.0, end + dt_));
    s.set("block_load_p_post_mw", mean_between(p, end - 1.0, end + dt_));
    break;
  }

  double stage2 = std::numeric_limits<double>::quiet_NaN();
  for (const auto& t : result.stages) {
    if (t.stage == Stage::BlackStartPowerIsland) {
      stage2 = t.time;
    }
  }
  if (!std::isnan(stage2)) {
    s.set("stage2_entry_s", stage2);
    s.set("readiness_window_ok", stage2 <= kReadinessWindowS ? 1.0 : 0.0);
  }
  s.set("bess_q_capability_mvar", case_.bess.params.q_rated_mvar);
  s.set("export_q_capability_ok", case_.bess.params.q_rated_mvar >= kExportReactiveMvar ? 1.0 : 0.0);
  s.set("wt_clamp_steps", static_cast<double>(clamp_steps));
  s.set("violations", static_cast<double>(result.violations.count()));
  return result;
}

}  // namespace

SimulationResult simulate(const CaseDefinition& c, const EventSchedule& schedule) {
  validate_case(c);
  validate_schedule(schedule, c);
  if (schedule.last_time() > c.run.duration_s) {
    throw ScenarioError(
        fmt::format("run duration {} s ends before the last event at {} s", c.run.duration_s, schedule.last_time()));
  }
  Driver driver(c, schedule);
  return driver.run();
}

std::vector<SimulationResult> simulate_all(const std::vector<SimulationJob>& jobs) {
  std::vector<SimulationResult> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      results[idx] = simulate(jobs[idx].definition, jobs[idx].schedule);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return results;
}

std::vector<SimulationResult> simulate_all_serial(const std::vector<SimulationJob>& jobs) {
  std::vector<SimulationResult> results;
  results.reserve(jobs.size());
  for (const auto& job : jobs) {
    results.push_back(simulate(job.definition, job.schedule));
  }
  return results;
}

}  // namespace blackstart::scenario
