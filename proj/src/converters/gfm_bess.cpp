#include "blackstart/converters/gfm_bess.hpp"

#include <algorithm>
#include <stdexcept>

namespace blackstart::converters {

double gfm_droop_frequency(double p_ref_mw, double p_meas_mw, const GfmBessParams& params) {
  return kOmega0 * (1.0 + params.k_p * (p_ref_mw - p_meas_mw) / params.p_rated_mw);
}

GfmOutput gfm_controller_step(const GfmInputs& in, const GfmBessState& state,
                              const GfmBessParams& params, double dt) {
  GfmOutput out;
  GfmBessState& s = out.state;
  s = state;
  s.p_meas_mw = in.p_meas_mw;

  const double v_ref = s.soft_charge_scale * params.v_ref_pu;
  s.error_filter = lowpass_step(state.error_filter, params.k_v * (v_ref - in.v_rms_pu),
                                params.error_filter_rad_s, dt);
  s.v_d = v_ref + s.error_filter;
  s.v_q = 0.0;

  s.limiter_active = false;
  if (params.current_limit_pu && in.i_magnitude_pu > *params.current_limit_pu) {
    s.limiter_active = true;
    s.v_d = std::max(0.0, s.v_d - params.limiter_resistance_pu *
                                      (in.i_magnitude_pu - *params.current_limit_pu));
  }

  s.omega = gfm_droop_frequency(s.p_ref_mw, s.p_meas_mw, params);
  s.theta = wrap_angle(state.theta + s.omega * dt);
  out.v_abc_pu = inverse_park({s.v_d, s.v_q}, s.theta);
  return out;
}

double soft_charge_reference(double t, double ramp_s) {
  if (t < 0.0) {
    throw std::invalid_argument("soft-charge time must not be negative");
  }
  return std::min(t / ramp_s, 1.0);
}

}  // namespace blackstart::converters
