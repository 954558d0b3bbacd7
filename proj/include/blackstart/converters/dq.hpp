#pragma once

#include <array>
#include <numbers>

namespace blackstart::converters {

inline constexpr double kOmega0 = 2.0 * std::numbers::pi * 50.0;

using Abc = std::array<double, 3>;

struct Dq {
  double d = 0.0;
  double q = 0.0;

  friend bool operator==(const Dq&, const Dq&) = default;
};

/// Amplitude-invariant Park transform. A balanced set of peak V at angle phi
/// maps to d = V cos(phi - theta), q = V sin(phi - theta). The zero-sequence
/// component is discarded.
Dq park(const Abc& abc, double theta);
Abc inverse_park(const Dq& dq, double theta);

double magnitude(const Dq& dq);

/// Wraps an angle into [0, 2 pi).
double wrap_angle(double theta);

/// One step of a first-order low-pass with cutoff `omega_c` (rad/s),
/// discretized exactly for a signal held over the step.
double lowpass_step(double y, double x, double omega_c, double dt);

/// Per-unit base of a three-phase rating. Instantaneous phase quantities are
/// normalized by the phase peak values, so a rated balanced set is 1 pu.
struct PerUnitBase {
  double s_mva = 1.0;
  double v_kv = 1.0;  // line-to-line RMS

  double z_ohm() const { return v_kv * v_kv / s_mva; }
  double v_peak() const;  // V, phase peak
  double i_peak() const;  // A, phase peak
  double inductance_h(double x_pu) const { return x_pu * z_ohm() / kOmega0; }
  double resistance_ohm(double r_pu) const { return r_pu * z_ohm(); }
  double capacitance_f(double b_pu) const { return b_pu / (kOmega0 * z_ohm()); }
};

}  // namespace blackstart::converters
