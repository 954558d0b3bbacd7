#pragma once

#include "blackstart/converters/dq.hpp"
#include "blackstart/converters/pll.hpp"

namespace blackstart::converters {

struct GflWtParams {
  double p_rated_mw = 12.0;
  double power_factor = 0.9;
  double v_lv_kv = 0.69;
  double filter_l_pu = 0.1;
  double filter_r_pu = 0.005;
  double shunt_r_pu = 0.003;
  double shunt_c_pu = 0.075;
  double transformer_r_pu = 0.0054;
  double transformer_x_pu = 0.1;
  double transformer_hv_kv = 66.0;
  PllParams pll;
  double current_k_p = 0.2;
  double current_t_i_s = 5.0;
  double voltage_droop = 0.05;   // reactive current per pu voltage error
  double dc_k_p = 0.3;           // DC-link voltage loop (held at its reference)
  double dc_t_i_s = 0.2;
  double ac_k_p = 1e-4;          // outer AC-voltage trim on the reactive path
  double frequency_droop = 0.05;
  double p_ref_base_pu = 0.0;
  double v_ref_pu = 1.0;
  double v_meas_filter_rad_s = 2.0;  // six WTs in parallel go unstable from about 4

  double s_rated_mva() const { return p_rated_mw / power_factor; }
  PerUnitBase base() const { return {s_rated_mva(), v_lv_kv}; }
  friend bool operator==(const GflWtParams&, const GflWtParams&) = default;
};

struct GflWtState {
  PllState pll;
  double id_ref = 0.0;    // pu, PLL frame
  double iq_ref = 0.0;    // pu, positive = supplying reactive power
  double integrator_d = 0.0;
  double integrator_q = 0.0;
  double dc_link_ref = 1.0;
  double dc_link_meas = 1.0;
  double dc_integrator = 0.0;
  double v_meas_filtered = 1.0;  // pu, HV-terminal magnitude
  double p_ref = 0.0;            // pu after frequency droop
  bool enabled = false;
  double enable_time = 0.0;

  friend bool operator==(const GflWtState&, const GflWtState&) = default;
};

struct GflWtInputs {
  Abc v_terminal_pu{};  // filter terminal (converter side of the transformer)
  Abc i_pu{};           // converter output current
  Abc v_hv_pu{};        // transformer HV terminal, where reactive droop regulates
};

struct GflWtOutput {
  GflWtState state;
  Abc v_abc_pu{};        // converter voltage behind the filter
  bool clamped = false;  // references were scaled onto the rating circle
};

/// i_q reference (positive = supplying vars) from the voltage droop.
double wt_reactive_reference(double v_meas_pu, double v_ref_pu, double droop = 0.05);

/// Active power reference after the frequency droop, clamped to [0, 1] pu.
double wt_frequency_droop(double omega_hat, double p_ref_base_pu, double droop = 0.05);

/// Scales (id, iq) onto the unit circle if it lies outside; returns whether it did.
bool clamp_to_rating(double& id, double& iq, double limit = 1.0);

/// Grid-following control step: PLL, outer references, dq current PI with
/// voltage feedforward and decoupling. The output is the converter voltage
/// for the next step, which drives the filter inductance. A disabled
/// converter outputs zero and leaves its state untouched.
GflWtOutput gfl_wt_step(const GflWtInputs& in, const GflWtState& state, const GflWtParams& params,
                        double dt);

/// State for a converter that starts at the given terminal voltage: the PLL
/// is aligned with it. The voltage filter starts at 1 pu rather than the
/// measurement, which right after the breaker closes is still ringing.
GflWtState gfl_wt_enable(const GflWtInputs& in, double time);

}  // namespace blackstart::converters
