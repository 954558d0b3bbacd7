#include "blackstart/converters/pll.hpp"

#include <algorithm>

namespace blackstart::converters {

PllState pll_step(double vq_measured, const PllState& state, const PllParams& params, double dt) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  PllState next = state;
  next.vq_filtered = lowpass_step(state.vq_filtered, vq_measured, params.prefilter_rad_s, dt);

  const double k_i = params.k_p / params.t_i_s;
  const double w_min = kTwoPi * params.f_min_hz;
  const double w_max = kTwoPi * params.f_max_hz;
  const double proportional = kOmega0 * params.k_p * next.vq_filtered;
  const double integrator = state.integrator + kOmega0 * k_i * next.vq_filtered * dt;
  const double unclamped = kOmega0 + proportional + integrator;
  next.omega = std::clamp(unclamped, w_min, w_max);
  // Anti-windup: keep the old integrator if it would push further into the clamp.
  const bool winding = (unclamped > w_max && integrator > state.integrator) ||
                       (unclamped < w_min && integrator < state.integrator);
  next.integrator = winding ? state.integrator : integrator;
  next.theta = wrap_angle(state.theta + next.omega * dt);
  return next;
}

PllState pll_locked(double theta, double omega) {
  PllState s;
  s.theta = wrap_angle(theta);
  s.omega = omega;
  s.integrator = omega - kOmega0;
  return s;
}

}  // namespace blackstart::converters
