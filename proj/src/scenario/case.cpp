#include "blackstart/scenario/case.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>

namespace blackstart::scenario {

using circuit::Breaker;
using circuit::Capacitor;
using circuit::CoreSide;
using circuit::LinearCore;
using circuit::PiSection;
using circuit::Resistor;
using circuit::RlLoad;
using circuit::ShuntReactor;
using circuit::TSection;
using circuit::TwoWindingTransformer;

namespace {

constexpr const char* kGroundName = "ground";

// Export cable per km. The shunt capacitance makes the 100 km charging at
// 220 kV cover the 320 Mvar of reactors plus about 11.5 Mvar that the BESS
// absorbs at no load; series values are typical XLPE figures.
constexpr double kExportCPerKm = 0.218e-6;
constexpr double kExportRPerKm = 0.03;
constexpr double kExportLPerKm = 0.4e-3;
constexpr double kArrayCPerKm = 0.15e-6;
constexpr double kArrayRPerKm = 0.1;
constexpr double kArrayLPerKm = 0.4e-3;

PiSection export_section(double km) {
  return {kExportRPerKm * km, kExportLPerKm * km, 0.5 * kExportCPerKm * km};
}

}  // namespace

void SynchrocheckSettings::validate() const {
  if (!(max_df_hz > 0.0 && max_dv_pu > 0.0 && max_dtheta_deg > 0.0 && dwell_s > 0.0)) {
    throw ScenarioError("synchrocheck thresholds must be positive");
  }
}

void RunSettings::validate() const {
  if (!(dt_s > 0.0)) {
    throw ScenarioError("run.dt_s must be positive");
  }
  if (!(duration_s > 0.0)) {
    throw ScenarioError("run.duration_s must be positive");
  }
  if (decimation == 0) {
    throw ScenarioError("run.decimate must be at least 1");
  }
  if (!(current_limit_pu > 0.0)) {
    throw ScenarioError("run.current_limit_pu must be positive");
  }
  if (!(wt_deblock_delay_s >= 0.0)) {
    throw ScenarioError("run.wt_deblock_delay_s must not be negative");
  }
}

const NodeDef* CaseDefinition::find_node(std::string_view name) const {
  for (const auto& n : nodes) {
    if (n.name == name) {
      return &n;
    }
  }
  return nullptr;
}

const ElementDef* CaseDefinition::find_element(std::string_view id) const {
  for (const auto& e : elements) {
    if (e.id == id) {
      return &e;
    }
  }
  return nullptr;
}

const WtPlacement* CaseDefinition::find_wt(std::string_view id) const {
  for (const auto& w : wts) {
    if (w.id == id) {
      return &w;
    }
  }
  return nullptr;
}

bool CaseDefinition::has_breaker(std::string_view id) const {
  if (grid.enabled && id == grid.tie_breaker) {
    return true;
  }
  const auto* e = find_element(id);
  return e && std::holds_alternative<Breaker>(e->kind);
}

const TwoWindingTransformer& transformer_of(const CaseDefinition& c, std::string_view id) {
  const auto* e = c.find_element(id);
  const auto* tx = e ? std::get_if<TwoWindingTransformer>(&e->kind) : nullptr;
  if (!tx) {
    throw ScenarioError(fmt::format("'{}' is not a transformer of the case", id));
  }
  return *tx;
}

void validate_case(const CaseDefinition& c) {
  std::set<std::string, std::less<>> names;
  for (const auto& n : c.nodes) {
    if (n.name.empty() || n.name == kGroundName) {
      throw ScenarioError(fmt::format("invalid node name '{}'", n.name));
    }
    if (!names.insert(n.name).second) {
      throw ScenarioError(fmt::format("duplicate node '{}'", n.name));
    }
    if (!(n.kv > 0.0)) {
      throw ScenarioError(fmt::format("node '{}': kv must be positive", n.name));
    }
  }
  const auto known = [&](const std::string& node) { return node == kGroundName || names.count(node) > 0; };
  std::set<std::string, std::less<>> ids;
  for (const auto& e : c.elements) {
    if (!ids.insert(e.id).second) {
      throw ScenarioError(fmt::format("duplicate element '{}'", e.id));
    }
    for (const auto* node : {&e.from, &e.to}) {
      if (!known(*node)) {
        throw ScenarioError(fmt::format("element '{}' references unknown node '{}'", e.id, *node));
      }
    }
    try {
      circuit::validate(circuit::Element{e.id, 1, 2, e.kind});
    } catch (const circuit::CircuitError& err) {
      throw ScenarioError(err.what());
    }
  }
  const auto need_node = [&](const std::string& node, std::string_view what) {
    if (!names.count(node)) {
      throw ScenarioError(fmt::format("{} references unknown node '{}'", what, node));
    }
  };
  need_node(c.bess.terminal_node, "bess");
  need_node(c.bess.poc_node, "bess");
  (void)transformer_of(c, c.bess.transformer);
  const auto& p = c.bess.params;
  if (!(p.s_rated_mva > 0 && p.p_rated_mw > 0 && p.q_rated_mvar > 0 && p.v_rated_kv > 0 && p.filter_l_pu > 0 &&
        p.filter_r_pu >= 0 && p.k_v > 0 && p.error_filter_rad_s > 0 && p.v_ref_pu > 0)) {
    throw ScenarioError("bess: ratings and gains must be positive");
  }
  if (!(p.k_p > 0.0 && p.k_p < 1.0)) {
    throw ScenarioError("bess.k_p must lie in (0, 1)");
  }
  const auto& w = c.wt_params;
  if (!(w.p_rated_mw > 0 && w.power_factor > 0 && w.power_factor <= 1 && w.v_lv_kv > 0 && w.filter_l_pu > 0 &&
        w.filter_r_pu >= 0 && w.current_k_p > 0 && w.current_t_i_s > 0 && w.pll.k_p > 0 && w.pll.t_i_s > 0 &&
        w.pll.prefilter_rad_s > 0 && w.dc_k_p > 0 && w.dc_t_i_s > 0 && w.ac_k_p > 0 && w.v_ref_pu > 0 &&
        w.v_meas_filter_rad_s > 0)) {
    throw ScenarioError("wt_params: ratings and gains must be positive");
  }
  if (!(w.voltage_droop > 0 && w.voltage_droop < 1 && w.frequency_droop > 0 && w.frequency_droop < 1)) {
    throw ScenarioError("wt_params: droops must lie in (0, 1)");
  }
  std::set<std::string, std::less<>> wt_ids;
  for (const auto& wt : c.wts) {
    if (wt.id.empty() || !wt_ids.insert(wt.id).second) {
      throw ScenarioError(fmt::format("duplicate or empty wind turbine id '{}'", wt.id));
    }
    need_node(wt.terminal_node, wt.id);
    need_node(wt.hv_node, wt.id);
    if (!c.has_breaker(wt.breaker)) {
      throw ScenarioError(fmt::format("{}: unknown breaker '{}'", wt.id, wt.breaker));
    }
    if (ids.count(wt.source_id())) {
      throw ScenarioError(fmt::format("element id '{}' is reserved for the converter", wt.source_id()));
    }
  }
  if (ids.count(c.bess.source_id())) {
    throw ScenarioError(fmt::format("element id '{}' is reserved for the converter", c.bess.source_id()));
  }
  if (!c.has_breaker(c.block_load.breaker)) {
    throw ScenarioError(fmt::format("block load: unknown breaker '{}'", c.block_load.breaker));
  }
  if (!c.find_element(c.block_load.element)) {
    throw ScenarioError(fmt::format("block load: unknown element '{}'", c.block_load.element));
  }
  if (c.grid.enabled) {
    if (names.count(c.grid.node) || ids.count(c.grid.tie_breaker)) {
      throw ScenarioError("external grid node or tie breaker clashes with the case");
    }
    need_node(c.grid.island_node, "grid");
    if (!(c.grid.kv > 0 && c.grid.scr > 0 && c.grid.s_base_mva > 0 && c.grid.x_over_r > 0)) {
      throw ScenarioError("grid parameters must be positive");
    }
  }
  c.synchrocheck.validate();
  c.run.validate();
  try {
    c.envelope.validate();
  } catch (const std::exception& err) {
    throw ScenarioError(err.what());
  }
}

CaseDefinition build_default_case(std::size_t wt_count) {
  CaseDefinition c;
  c.name = "default-blackstart";
  const auto node = [&](std::string name, double kv) { c.nodes.push_back({std::move(name), kv}); };
  const auto element = [&](std::string id, std::string from, std::string to, circuit::ElementKind kind) {
    c.elements.push_back({std::move(id), std::move(from), std::move(to), std::move(kind)});
  };

  const auto& bess = c.bess.params;
  node("bess_33", bess.v_rated_kv);
  node("bess_220", 220.0);
  element("tx_bess", "bess_220", "bess_33",
          TwoWindingTransformer{bess.s_rated_mva, bess.transformer_hv_kv, bess.v_rated_kv, bess.transformer_r_pu,
                                bess.transformer_x_pu, LinearCore{500.0}, CoreSide::Lv});

  node("onshore_220", 220.0);
  element("brk_export", "bess_220", "onshore_220", Breaker{true});
  element("reactor_onshore", "onshore_220", kGroundName, ShuntReactor{190.0, 220.0, 200.0});

  node("onshore_400", 400.0);
  element("tx_400", "onshore_400", "onshore_220",
          TwoWindingTransformer{475.0, 400.0, 220.0, 0.002, 0.15, circuit::default_saturation_curve(), CoreSide::Lv});
  node("load_400", 400.0);
  element("brk_load", "onshore_400", "load_400", Breaker{false});
  element("load", "load_400", kGroundName, RlLoad{20.0, 0.0, 400.0});

  // 40 km land cable, then 60 km submarine, as 10 km pi sections.
  std::vector<std::string> route{"onshore_220", "land_1", "land_2", "land_3", "joint",
                                 "sub_1",       "sub_2",  "sub_3",  "sub_4",  "sub_5", "offshore_220"};
  for (std::size_t k = 1; k < route.size(); ++k) {
    node(route[k], 220.0);
    const std::string id = k <= 4 ? fmt::format("land_cable_{}", k) : fmt::format("sub_cable_{}", k - 4);
    element(id, route[k - 1], route[k], export_section(10.0));
  }
  element("reactor_offshore", "offshore_220", kGroundName, ShuntReactor{130.0, 220.0, 200.0});

  node("bus_66", 66.0);
  element("tx_66", "offshore_220", "bus_66",
          TwoWindingTransformer{240.0, 220.0, 66.0, 0.003, 0.12, circuit::default_saturation_curve(), CoreSide::Hv});

  const auto& wt = c.wt_params;
  const converters::PerUnitBase wt_base = wt.base();
  for (std::size_t k = 1; k <= wt_count; ++k) {
    const std::string id = fmt::format("wt{}", k);
    const std::string array = fmt::format("{}_array", id);
    const std::string hv = fmt::format("{}_66", id);
    const std::string lv = fmt::format("{}_lv", id);
    const std::string filt = fmt::format("{}_filter", id);
    node(array, 66.0);
    node(hv, 66.0);
    node(lv, wt.v_lv_kv);
    node(filt, wt.v_lv_kv);
    element(fmt::format("brk_{}", id), "bus_66", array, Breaker{false});
    element(fmt::format("{}_cable", id), array, hv,
            TSection{kArrayRPerKm * 12.0, kArrayLPerKm * 12.0, kArrayCPerKm * 12.0});
    element(fmt::format("tx_{}", id), hv, lv,
            TwoWindingTransformer{wt.s_rated_mva(), wt.transformer_hv_kv, wt.v_lv_kv, wt.transformer_r_pu,
                                  wt.transformer_x_pu, LinearCore{500.0}, CoreSide::Hv});
    element(fmt::format("{}_shunt_r", id), lv, filt, Resistor{wt_base.resistance_ohm(wt.shunt_r_pu)});
    element(fmt::format("{}_shunt_c", id), filt, kGroundName, Capacitor{wt_base.capacitance_f(wt.shunt_c_pu)});
    c.wts.push_back({id, lv, hv, fmt::format("brk_{}", id)});
  }

  c.envelope.voltage_channels = {"bess_v_rms", "v66_rms"};
  c.envelope.frequency_channels = {"island_f"};
  c.envelope.current_channels = {"bess_i_rms"};
  // ramp end plus one cycle of the RMS window
  c.envelope.monitor_from_s = 0.52;
  return c;
}

CaseDefinition build_hard_switch_case() {
  CaseDefinition c = build_default_case();
  c.name = "hard-switch";
  for (auto& e : c.elements) {
    if (e.id == "brk_export") {
      e.kind = Breaker{false};
    }
  }
  c.run.duration_s = 3.0;
  c.envelope.monitor_from_s = 0.5;
  return c;
}

circuit::Network build_network(const CaseDefinition& c, const BuildOptions& options) {
  validate_case(c);
  circuit::Network net;
  for (const auto& n : c.nodes) {
    net.add_node(n.name, n.kv);
  }
  if (c.grid.enabled) {
    net.add_node(c.grid.node, c.grid.kv);
  }
  for (const auto& e : c.elements) {
    circuit::ElementKind kind = e.kind;
    if (auto* tx = std::get_if<TwoWindingTransformer>(&kind); tx && !options.saturation) {
      if (const auto* curve = std::get_if<circuit::SaturationCurve>(&tx->core)) {
        tx->core = LinearCore{curve->unsaturated_inductance_pu()};
      }
    }
    net.add_element({e.id, net.node_id(e.from), net.node_id(e.to), std::move(kind)});
  }

  const auto& bp = c.bess.params;
  const auto bess_base = bp.base();
  net.add_element({c.bess.source_id(), net.node_id(c.bess.terminal_node), circuit::kGround,
                   circuit::ControlledVoltageSource{bess_base.resistance_ohm(bp.filter_r_pu),
                                                    bess_base.inductance_h(bp.filter_l_pu)}});
  const auto wt_base = c.wt_params.base();
  for (const auto& wt : c.wts) {
    net.add_element({wt.source_id(), net.node_id(wt.terminal_node), circuit::kGround,
                     circuit::ControlledVoltageSource{wt_base.resistance_ohm(c.wt_params.filter_r_pu),
                                                      wt_base.inductance_h(c.wt_params.filter_l_pu)}});
  }
  if (c.grid.enabled) {
    const double z = c.grid.kv * c.grid.kv / (c.grid.scr * c.grid.s_base_mva);
    const double r = z / std::sqrt(1.0 + c.grid.x_over_r * c.grid.x_over_r);
    net.add_element({c.grid.source_id(), net.node_id(c.grid.node), circuit::kGround,
                     circuit::ControlledVoltageSource{r, r * c.grid.x_over_r / circuit::kOmega0}});
    net.add_element({c.grid.tie_breaker, net.node_id(c.grid.island_node), net.node_id(c.grid.node),
                     Breaker{false}});
  }
  return net;
}

}  // namespace blackstart::scenario
