#include "blackstart/converters/gfl_wt.hpp"

#include <algorithm>
#include <cmath>

namespace blackstart::converters {

double wt_reactive_reference(double v_meas_pu, double v_ref_pu, double droop) {
  return (v_ref_pu - v_meas_pu) / droop;
}

double wt_frequency_droop(double omega_hat, double p_ref_base_pu, double droop) {
  return std::clamp(p_ref_base_pu - (omega_hat / kOmega0 - 1.0) / droop, 0.0, 1.0);
}

bool clamp_to_rating(double& id, double& iq, double limit) {
  const double mag = std::hypot(id, iq);
  if (mag <= limit) {
    return false;
  }
  id *= limit / mag;
  iq *= limit / mag;
  return true;
}

GflWtOutput gfl_wt_step(const GflWtInputs& in, const GflWtState& state, const GflWtParams& params,
                        double dt) {
  GflWtOutput out;
  out.state = state;
  if (!state.enabled) {
    return out;
  }
  GflWtState& s = out.state;

  const Dq v = park(in.v_terminal_pu, state.pll.theta);
  const Dq i = park(in.i_pu, state.pll.theta);
  s.pll = pll_step(v.q, state.pll, params.pll, dt);

  const double v_hv = magnitude(park(in.v_hv_pu, state.pll.theta));
  s.v_meas_filtered = lowpass_step(state.v_meas_filtered, v_hv, params.v_meas_filter_rad_s, dt);
  const double v_err = params.v_ref_pu - s.v_meas_filtered;

  s.p_ref = wt_frequency_droop(s.pll.omega, params.p_ref_base_pu, params.frequency_droop);
  // The DC link is not modelled; its loop sees zero error and outputs nothing.
  const double dc_err = s.dc_link_ref - s.dc_link_meas;
  s.dc_integrator += params.dc_k_p / params.dc_t_i_s * dc_err * dt;
  const double dc_out = params.dc_k_p * dc_err + s.dc_integrator;

  double id_ref = s.p_ref / std::max(v.d, 0.1) + dc_out;
  double iq_ref = wt_reactive_reference(s.v_meas_filtered, params.v_ref_pu, params.voltage_droop) +
                  params.ac_k_p * v_err;
  out.clamped = clamp_to_rating(id_ref, iq_ref);
  s.id_ref = id_ref;
  s.iq_ref = iq_ref;

  // Supplying vars means lagging current, i.e. negative i_q in this frame.
  const double id_cmd = id_ref;
  const double iq_cmd = -iq_ref;
  const double k_i = params.current_k_p / params.current_t_i_s;
  const double e_d = id_cmd - i.d;
  const double e_q = iq_cmd - i.q;
  s.integrator_d += k_i * e_d * dt;
  s.integrator_q += k_i * e_q * dt;
  const double w_pu = s.pll.omega / kOmega0;
  const double x = w_pu * params.filter_l_pu;
  const Dq u{v.d + params.filter_r_pu * id_cmd - x * i.q + params.current_k_p * e_d + s.integrator_d,
             v.q + params.filter_r_pu * iq_cmd + x * i.d + params.current_k_p * e_q + s.integrator_q};

  // The command is the source value at the end of the coming step.
  out.v_abc_pu = inverse_park(u, s.pll.theta);
  return out;
}

GflWtState gfl_wt_enable(const GflWtInputs& in, double time) {
  GflWtState s;
  const Dq v0 = park(in.v_terminal_pu, 0.0);
  // park(., 0) gives d = V cos(phi), q = V sin(phi) for a balanced set at phi.
  s.pll = pll_locked(std::atan2(v0.q, v0.d));
  s.enabled = true;
  s.enable_time = time;
  return s;
}

}  // namespace blackstart::converters
