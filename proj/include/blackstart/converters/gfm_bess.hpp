#pragma once

#include <optional>

#include "blackstart/converters/dq.hpp"

namespace blackstart::converters {

struct GfmBessParams {
  double s_rated_mva = 112.0;
  double p_rated_mw = 50.0;
  double q_rated_mvar = 100.0;
  double v_rated_kv = 33.0;
  double filter_l_pu = 0.1;
  double filter_r_pu = 0.025;
  double transformer_r_pu = 0.004;
  double transformer_x_pu = 0.1;
  double transformer_hv_kv = 220.0;
  double k_v = 10.0;
  double k_p = 0.05;
  double error_filter_rad_s = 5.0;  // 20 rings against the export cable resonance
  double v_ref_pu = 1.0;
  // Virtual-impedance current limiter; off unless set.
  std::optional<double> current_limit_pu;
  double limiter_resistance_pu = 1.0;

  PerUnitBase base() const { return {s_rated_mva, v_rated_kv}; }
  friend bool operator==(const GfmBessParams&, const GfmBessParams&) = default;
};

struct GfmBessState {
  double theta = 0.0;            // rad, [0, 2 pi)
  double omega = kOmega0;        // rad/s
  double v_d = 0.0;              // pu
  double v_q = 0.0;              // always 0
  double error_filter = 0.0;     // pu
  double p_meas_mw = 0.0;
  double p_ref_mw = 0.0;
  double soft_charge_scale = 1.0;
  bool limiter_active = false;

  friend bool operator==(const GfmBessState&, const GfmBessState&) = default;
};

struct GfmInputs {
  double v_rms_pu = 0.0;     // at the voltage-controlled bus
  double p_meas_mw = 0.0;    // filtered output power
  double i_magnitude_pu = 0.0;  // converter current |i_dq|, used by the limiter only
};

struct GfmOutput {
  GfmBessState state;
  Abc v_abc_pu{};  // converter voltage command, pu of rated phase peak
};

/// Voltage-magnitude and P/f droop grid-forming control. The soft-charge
/// scale multiplies the voltage reference, so the k_v loop follows the ramp
/// instead of fighting it.
GfmOutput gfm_controller_step(const GfmInputs& in, const GfmBessState& state,
                              const GfmBessParams& params, double dt);

/// Frequency the droop law settles at for a given power mismatch.
double gfm_droop_frequency(double p_ref_mw, double p_meas_mw, const GfmBessParams& params);

/// Soft-charge voltage ramp: 0 at t = 0, linear to 1 at `ramp_s`.
double soft_charge_reference(double t, double ramp_s = 0.5);

}  // namespace blackstart::converters
