#pragma once

#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

#include "blackstart/circuit/saturation.hpp"

namespace blackstart::circuit {

inline constexpr double kNominalFrequencyHz = 50.0;
inline constexpr double kOmega0 = 2.0 * std::numbers::pi * kNominalFrequencyHz;

using NodeId = int;
inline constexpr NodeId kGround = 0;

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Element parameters are SI unless the name says otherwise. Per-unit
// values are on the element's own MVA / kV base.

struct Resistor {
  double r_ohm = 0.0;
  friend bool operator==(const Resistor&, const Resistor&) = default;
};

struct Inductor {
  double l_h = 0.0;
  friend bool operator==(const Inductor&, const Inductor&) = default;
};

struct Capacitor {
  double c_f = 0.0;
  friend bool operator==(const Capacitor&, const Capacitor&) = default;
};

/// Cable pi section: series R-L with half the shunt capacitance at each end.
struct PiSection {
  double r_series_ohm = 0.0;
  double l_series_h = 0.0;
  double c_shunt_each_end_f = 0.0;
  friend bool operator==(const PiSection&, const PiSection&) = default;
};

/// Cable T section: two half series R-L branches around a mid-point shunt
/// capacitance. Adds one internal node.
struct TSection {
  double r_series_ohm = 0.0;
  double l_series_h = 0.0;
  double c_shunt_f = 0.0;
  friend bool operator==(const TSection&, const TSection&) = default;
};

/// Shunt reactor to ground, rated at nominal line-to-line voltage.
struct ShuntReactor {
  double q_rated_mvar = 0.0;
  double v_nominal_kv = 0.0;
  double x_over_r = 200.0;
  friend bool operator==(const ShuntReactor&, const ShuntReactor&) = default;
};

struct LinearCore {
  double x_mag_pu = 500.0;
  friend bool operator==(const LinearCore&, const LinearCore&) = default;
};

using CoreModel = std::variant<LinearCore, SaturationCurve>;

enum class CoreSide { Hv, Lv };

/// Per-phase two-winding transformer: leakage impedance referred to the LV
/// side plus a magnetizing branch on the winding given by `core_side`.
/// `from` is the HV terminal, `to` the LV terminal.
struct TwoWindingTransformer {
  double s_rated_mva = 0.0;
  double v_hv_kv = 0.0;
  double v_lv_kv = 0.0;
  double r_leak_pu = 0.0;
  double x_leak_pu = 0.0;
  CoreModel core = LinearCore{};
  CoreSide core_side = CoreSide::Hv;
  friend bool operator==(const TwoWindingTransformer&, const TwoWindingTransformer&) = default;
};

struct Breaker {
  bool closed = false;
  friend bool operator==(const Breaker&, const Breaker&) = default;
};

/// Constant-impedance load: series R-L sized for the rated P/Q at nominal
/// voltage; a pure resistor when q_rated_mvar is zero.
struct RlLoad {
  double p_rated_mw = 0.0;
  double q_rated_mvar = 0.0;
  double v_nominal_kv = 0.0;
  friend bool operator==(const RlLoad&, const RlLoad&) = default;
};

/// Ideal per-phase voltage source behind a series R-L, between ground and
/// `from`. The setpoint is supplied every step by the owner.
struct ControlledVoltageSource {
  double r_series_ohm = 0.0;
  double l_series_h = 0.0;
  friend bool operator==(const ControlledVoltageSource&, const ControlledVoltageSource&) = default;
};

/// Ideal per-phase current injection into `from`, returning through `to`.
struct ControlledCurrentSource {
  friend bool operator==(const ControlledCurrentSource&, const ControlledCurrentSource&) = default;
};

using ElementKind = std::variant<Resistor, Inductor, Capacitor, PiSection, TSection, ShuntReactor,
                                 TwoWindingTransformer, Breaker, RlLoad, ControlledVoltageSource,
                                 ControlledCurrentSource>;

struct Element {
  std::string id;
  NodeId from = kGround;
  NodeId to = kGround;
  ElementKind kind;
};

/// Throws CircuitError naming the element when a parameter is out of range.
void validate(const Element& element);

const char* kind_name(const ElementKind& kind);

}  // namespace blackstart::circuit
