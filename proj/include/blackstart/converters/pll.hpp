#pragma once

#include "blackstart/converters/dq.hpp"

namespace blackstart::converters {

struct PllParams {
  double k_p = 0.1;             // pu frequency per pu v_q
  double t_i_s = 2.0;           // integral time
  double prefilter_rad_s = 500.0;
  double f_min_hz = 40.0;
  double f_max_hz = 60.0;
  friend bool operator==(const PllParams&, const PllParams&) = default;
};

struct PllState {
  double theta = 0.0;       // rad, [0, 2 pi)
  double omega = kOmega0;   // rad/s
  double integrator = 0.0;  // rad/s
  double vq_filtered = 0.0; // pu

  friend bool operator==(const PllState&, const PllState&) = default;
};

/// Synchronous-frame PLL: v_q is low-pass filtered, a PI drives it to zero
/// by adjusting the frequency, and the angle integrates the frequency.
/// The frequency is clamped to [f_min, f_max]; the integrator stops winding
/// up while the clamp is active.
PllState pll_step(double vq_measured, const PllState& state, const PllParams& params, double dt);

/// State locked onto a balanced set at angle `theta` and frequency `omega`.
PllState pll_locked(double theta, double omega = kOmega0);

}  // namespace blackstart::converters
