#include "blackstart/circuit/stamp.hpp"

#include <cmath>

namespace blackstart::circuit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Branch make(BranchKind kind, NodeId a, NodeId b, std::size_t element) {
  Branch br;
  br.kind = kind;
  br.a = a;
  br.b = b;
  br.element = element;
  return br;
}

Branch series_rl(NodeId a, NodeId b, double r, double l, std::size_t element) {
  Branch br = make(BranchKind::SeriesRl, a, b, element);
  br.r = r;
  br.l = l;
  return br;
}

Branch capacitor(NodeId a, NodeId b, double c, std::size_t element) {
  Branch br = make(BranchKind::Capacitor, a, b, element);
  br.c = c;
  return br;
}

Branch conductance(NodeId a, NodeId b, double r, std::size_t element) {
  Branch br = make(BranchKind::Conductance, a, b, element);
  br.r = r;
  return br;
}

void add_pair(CompanionStamp& s, NodeId a, NodeId b, double g) {
  s.conductances.push_back({a, a, g});
  s.conductances.push_back({b, b, g});
  s.conductances.push_back({a, b, -g});
  s.conductances.push_back({b, a, -g});
}

}  // namespace

double CompanionStamp::entry(NodeId row, NodeId col) const {
  double sum = 0.0;
  for (const auto& e : conductances) {
    if (e.row == row && e.col == col) {
      sum += e.siemens;
    }
  }
  return sum;
}

double CompanionStamp::injection(NodeId node) const {
  double sum = 0.0;
  for (const auto& [n, value] : injections) {
    if (n == node) {
      sum += value;
    }
  }
  return sum;
}

std::vector<Branch> expand_element(const Element& e, std::size_t idx, NodeId& next_internal) {
  std::vector<Branch> out;
  std::visit(
      Overloaded{
          [&](const Resistor& x) { out.push_back(conductance(e.from, e.to, x.r_ohm, idx)); },
          [&](const Inductor& x) { out.push_back(series_rl(e.from, e.to, 0.0, x.l_h, idx)); },
          [&](const Capacitor& x) { out.push_back(capacitor(e.from, e.to, x.c_f, idx)); },
          [&](const PiSection& x) {
            out.push_back(series_rl(e.from, e.to, x.r_series_ohm, x.l_series_h, idx));
            out.push_back(capacitor(e.from, kGround, x.c_shunt_each_end_f, idx));
            out.push_back(capacitor(e.to, kGround, x.c_shunt_each_end_f, idx));
          },
          [&](const TSection& x) {
            if (next_internal < 0) {
              throw CircuitError("t_section '" + e.id + "' needs an internal node id");
            }
            const NodeId mid = next_internal++;
            out.push_back(series_rl(e.from, mid, 0.5 * x.r_series_ohm, 0.5 * x.l_series_h, idx));
            out.push_back(capacitor(mid, kGround, x.c_shunt_f, idx));
            out.push_back(series_rl(mid, e.to, 0.5 * x.r_series_ohm, 0.5 * x.l_series_h, idx));
          },
          [&](const ShuntReactor& x) {
            const double reactance = x.v_nominal_kv * x.v_nominal_kv / x.q_rated_mvar;
            out.push_back(series_rl(e.from, e.to, reactance / x.x_over_r, reactance / kOmega0, idx));
          },
          [&](const TwoWindingTransformer& x) {
            const double z_lv = x.v_lv_kv * x.v_lv_kv / x.s_rated_mva;
            Branch leak = make(BranchKind::Transformer, e.from, e.to, idx);
            leak.r = x.r_leak_pu * z_lv;
            leak.l = x.x_leak_pu * z_lv / kOmega0;
            leak.ratio = x.v_hv_kv / x.v_lv_kv;
            out.push_back(leak);

            const bool hv = x.core_side == CoreSide::Hv;
            const double v_kv = hv ? x.v_hv_kv : x.v_lv_kv;
            const NodeId node = hv ? e.from : e.to;
            const double z_side = v_kv * v_kv / x.s_rated_mva;
            const double v_peak = v_kv * 1e3 * std::sqrt(2.0 / 3.0);
            const double i_peak = std::sqrt(2.0) * x.s_rated_mva * 1e6 / (std::sqrt(3.0) * v_kv * 1e3);
            Branch mag;
            if (const auto* linear = std::get_if<LinearCore>(&x.core)) {
              mag = series_rl(node, kGround, 0.0, linear->x_mag_pu * z_side / kOmega0, idx);
            } else {
              mag = make(BranchKind::Magnetizing, node, kGround, idx);
              mag.curve = std::get<SaturationCurve>(x.core);
            }
            mag.flux_base = v_peak / kOmega0;
            mag.current_base = i_peak;
            out.push_back(std::move(mag));
          },
          [&](const Breaker& x) {
            Branch br = make(BranchKind::Conductance, e.from, e.to, idx);
            br.is_breaker = true;
            br.closed = x.closed;
            out.push_back(br);
          },
          [&](const RlLoad& x) {
            const double v2 = x.v_nominal_kv * x.v_nominal_kv;
            const double s2 = x.p_rated_mw * x.p_rated_mw + x.q_rated_mvar * x.q_rated_mvar;
            const double r = v2 * x.p_rated_mw / s2;
            const double reactance = v2 * x.q_rated_mvar / s2;
            if (x.q_rated_mvar == 0.0) {
              out.push_back(conductance(e.from, e.to, r, idx));
            } else {
              out.push_back(series_rl(e.from, e.to, r, reactance / kOmega0, idx));
            }
          },
          [&](const ControlledVoltageSource& x) {
            Branch br = make(BranchKind::VoltageSource, e.from, kGround, idx);
            br.r = x.r_series_ohm;
            br.l = x.l_series_h;
            out.push_back(br);
          },
          [&](const ControlledCurrentSource&) {
            out.push_back(make(BranchKind::CurrentSource, e.from, e.to, idx));
          },
      },
      e.kind);
  return out;
}

CurveSegment si_segment(const Branch& br, int segment) {
  CurveSegment seg = br.curve->segment(segment);
  seg.flux0 *= br.flux_base;
  seg.current0 *= br.current_base;
  seg.inductance *= br.flux_base / br.current_base;
  return seg;
}

double branch_conductance(const Branch& br, double dt, const BranchState& st) {
  switch (br.kind) {
    case BranchKind::Conductance:
      if (br.is_breaker) {
        return br.closed ? kBreakerClosedSiemens : kBreakerOpenSiemens;
      }
      return 1.0 / br.r;
    case BranchKind::SeriesRl:
    case BranchKind::Transformer:
      return 1.0 / (br.r + 2.0 * br.l / dt);
    case BranchKind::VoltageSource:
      return br.enabled ? 1.0 / (br.r + 2.0 * br.l / dt) : 0.0;
    case BranchKind::Capacitor:
      return 2.0 * br.c / dt;
    case BranchKind::Magnetizing:
      return dt / (2.0 * si_segment(br, st.segment).inductance);
    case BranchKind::CurrentSource:
      return 0.0;
  }
  return 0.0;
}

double branch_history(const Branch& br, double dt, const BranchState& st, Integration method) {
  const double g = branch_conductance(br, dt, st);
  const bool trapezoidal = method == Integration::Trapezoidal;
  switch (br.kind) {
    case BranchKind::SeriesRl:
    case BranchKind::Transformer:
    case BranchKind::VoltageSource:
      if (br.kind == BranchKind::VoltageSource && !br.enabled) {
        return 0.0;
      }
      return trapezoidal ? g * (st.voltage + (2.0 * br.l / dt - br.r) * st.current)
                         : g * (2.0 * br.l / dt) * st.current;
    case BranchKind::Capacitor:
      return trapezoidal ? -(g * st.voltage + st.current) : -g * st.voltage;
    case BranchKind::Magnetizing: {
      const CurveSegment seg = si_segment(br, st.segment);
      const double carried = trapezoidal ? st.flux + 0.5 * dt * st.voltage : st.flux;
      return seg.current0 + (carried - seg.flux0) / seg.inductance;
    }
    case BranchKind::Conductance:
    case BranchKind::CurrentSource:
      return 0.0;
  }
  return 0.0;
}

CompanionStamp stamp_branch(const Branch& br, double dt, const BranchState& st) {
  CompanionStamp s;
  const double g = branch_conductance(br, dt, st);
  const double h = branch_history(br, dt, st);
  switch (br.kind) {
    case BranchKind::Transformer: {
      const double n = br.ratio;
      s.conductances.push_back({br.a, br.a, g / (n * n)});
      s.conductances.push_back({br.a, br.b, -g / n});
      s.conductances.push_back({br.b, br.a, -g / n});
      s.conductances.push_back({br.b, br.b, g});
      s.injections.emplace_back(br.a, -h / n);
      s.injections.emplace_back(br.b, h);
      break;
    }
    case BranchKind::VoltageSource:
      if (br.enabled) {
        s.conductances.push_back({br.a, br.a, g});
        s.injections.emplace_back(br.a, g * st.setpoint + h);
      }
      break;
    case BranchKind::CurrentSource:
      s.injections.emplace_back(br.a, st.setpoint);
      s.injections.emplace_back(br.b, -st.setpoint);
      break;
    default:
      add_pair(s, br.a, br.b, g);
      if (h != 0.0) {
        s.injections.emplace_back(br.a, -h);
        s.injections.emplace_back(br.b, h);
      }
      break;
  }
  return s;
}

CompanionStamp stamp_element(const Element& element, double dt, std::span<const BranchState> states,
                             NodeId internal_node) {
  if (!(dt > 0.0)) {
    throw CircuitError("time step must be positive");
  }
  validate(element);
  const auto branches = expand_element(element, 0, internal_node);
  CompanionStamp out;
  for (std::size_t k = 0; k < branches.size(); ++k) {
    const BranchState st = k < states.size() ? states[k] : BranchState{};
    CompanionStamp part = stamp_branch(branches[k], dt, st);
    out.conductances.insert(out.conductances.end(), part.conductances.begin(), part.conductances.end());
    out.injections.insert(out.injections.end(), part.injections.begin(), part.injections.end());
  }
  return out;
}

}  // namespace blackstart::circuit
