#include "blackstart/circuit/element.hpp"

#include <fmt/format.h>

namespace blackstart::circuit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(const Element& e, const char* what, double value) {
  if (!(value > 0.0)) {
    throw CircuitError(fmt::format("element '{}': {} must be positive (got {})", e.id, what, value));
  }
}

void require_non_negative(const Element& e, const char* what, double value) {
  if (!(value >= 0.0)) {
    throw CircuitError(fmt::format("element '{}': {} must not be negative (got {})", e.id, what, value));
  }
}

}  // namespace

void validate(const Element& e) {
  if (e.id.empty()) {
    throw CircuitError("element id must not be empty");
  }
  std::visit(Overloaded{
                 [&](const Resistor& x) { require_positive(e, "r_ohm", x.r_ohm); },
                 [&](const Inductor& x) { require_positive(e, "l_h", x.l_h); },
                 [&](const Capacitor& x) { require_positive(e, "c_f", x.c_f); },
                 [&](const PiSection& x) {
                   require_positive(e, "r_ohm", x.r_series_ohm);
                   require_positive(e, "l_h", x.l_series_h);
                   require_positive(e, "c_each_end_f", x.c_shunt_each_end_f);
                 },
                 [&](const TSection& x) {
                   require_positive(e, "r_ohm", x.r_series_ohm);
                   require_positive(e, "l_h", x.l_series_h);
                   require_positive(e, "c_f", x.c_shunt_f);
                 },
                 [&](const ShuntReactor& x) {
                   require_positive(e, "q_mvar", x.q_rated_mvar);
                   require_positive(e, "v_kv", x.v_nominal_kv);
                   require_positive(e, "x_over_r", x.x_over_r);
                 },
                 [&](const TwoWindingTransformer& x) {
                   require_positive(e, "s_mva", x.s_rated_mva);
                   require_positive(e, "v_hv_kv", x.v_hv_kv);
                   require_positive(e, "v_lv_kv", x.v_lv_kv);
                   require_positive(e, "r_pu", x.r_leak_pu);
                   require_positive(e, "x_pu", x.x_leak_pu);
                   if (const auto* linear = std::get_if<LinearCore>(&x.core)) {
                     require_positive(e, "x_mag_pu", linear->x_mag_pu);
                   }
                 },
                 [&](const Breaker&) {},
                 [&](const RlLoad& x) {
                   require_positive(e, "p_mw", x.p_rated_mw);
                   require_non_negative(e, "q_mvar", x.q_rated_mvar);
                   require_positive(e, "v_kv", x.v_nominal_kv);
                 },
                 [&](const ControlledVoltageSource& x) {
                   require_positive(e, "r_ohm", x.r_series_ohm);
                   require_positive(e, "l_h", x.l_series_h);
                 },
                 [&](const ControlledCurrentSource&) {},
             },
             e.kind);
  if (e.from == e.to && !std::holds_alternative<ControlledVoltageSource>(e.kind)) {
    throw CircuitError(fmt::format("element '{}' connects a node to itself", e.id));
  }
}

const char* kind_name(const ElementKind& kind) {
  return std::visit(Overloaded{
                        [](const Resistor&) { return "resistor"; },
                        [](const Inductor&) { return "inductor"; },
                        [](const Capacitor&) { return "capacitor"; },
                        [](const PiSection&) { return "pi_section"; },
                        [](const TSection&) { return "t_section"; },
                        [](const ShuntReactor&) { return "shunt_reactor"; },
                        [](const TwoWindingTransformer&) { return "transformer"; },
                        [](const Breaker&) { return "breaker"; },
                        [](const RlLoad&) { return "rl_load"; },
                        [](const ControlledVoltageSource&) { return "voltage_source"; },
                        [](const ControlledCurrentSource&) { return "current_source"; },
                    },
                    kind);
}

}  // namespace blackstart::circuit
