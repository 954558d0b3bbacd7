#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "blackstart/circuit/element.hpp"

namespace blackstart::circuit {

enum class BranchKind {
  Conductance,    // resistor or breaker pole
  SeriesRl,       // inductor, R-L series, linear magnetizing branch
  Capacitor,
  Magnetizing,    // saturable magnetizing inductance
  Transformer,    // ideal ratio plus LV-referred leakage R-L
  VoltageSource,  // Thevenin source, ground -> a
  CurrentSource,  // injection into a, returning through b
};

/// Primitive two-terminal (or ratio two-port) branch every element expands
/// into. Current is positive from `a` to `b` through the branch, except for
/// sources where it is the current injected into `a`.
struct Branch {
  BranchKind kind = BranchKind::Conductance;
  NodeId a = kGround;
  NodeId b = kGround;
  double r = 0.0;
  double l = 0.0;
  double c = 0.0;
  double ratio = 1.0;  // HV/LV turns ratio for Transformer
  bool closed = true;  // breaker poles
  bool is_breaker = false;
  bool enabled = true;  // sources
  std::optional<SaturationCurve> curve;
  double flux_base = 1.0;     // V*s per pu flux
  double current_base = 1.0;  // A per pu current
  std::size_t element = 0;
};

/// Per-phase state of one branch at the last solved step.
struct BranchState {
  double voltage = 0.0;  // branch voltage (e - v_a for voltage sources)
  double current = 0.0;
  double flux = 0.0;     // V*s, magnetizing branches only
  int segment = 0;       // saturation segment the factorization assumes
  double setpoint = 0.0; // source value for the step being solved
};

/// Trapezoidal rule over dt, or backward Euler over dt/2. The two share the
/// same companion conductances, so the engine can switch to two damped half
/// steps after a discontinuity without refactorizing.
enum class Integration { Trapezoidal, BackwardEulerHalf };

inline constexpr double kBreakerClosedSiemens = 1.0e6;
inline constexpr double kBreakerOpenSiemens = 1.0e-6;

struct MatrixEntry {
  NodeId row = kGround;
  NodeId col = kGround;
  double siemens = 0.0;
};

/// Trapezoidal companion model of an element for one step: nodal matrix
/// contributions plus the current injected into each node by history terms
/// and sources. Ground rows and columns are included; assembly drops them.
struct CompanionStamp {
  std::vector<MatrixEntry> conductances;
  std::vector<std::pair<NodeId, double>> injections;

  double entry(NodeId row, NodeId col) const;
  double injection(NodeId node) const;
};

std::vector<Branch> expand_element(const Element& element, std::size_t element_index,
                                   NodeId& next_internal_node);

/// Companion conductance of a branch for the segment held in `state`.
double branch_conductance(const Branch& branch, double dt, const BranchState& state);

/// History current h such that i_n = G * u_n + h, built from the previous
/// step's state.
double branch_history(const Branch& branch, double dt, const BranchState& state,
                      Integration method = Integration::Trapezoidal);

/// Saturation segment parameters converted to SI for a magnetizing branch.
CurveSegment si_segment(const Branch& branch, int segment);

CompanionStamp stamp_branch(const Branch& branch, double dt, const BranchState& state);

/// Stamps every branch of `element`. `states` holds one entry per expanded
/// branch (missing entries are zero state); T sections need the id their
/// internal node should take.
CompanionStamp stamp_element(const Element& element, double dt,
                             std::span<const BranchState> states = {},
                             NodeId internal_node = -1);

}  // namespace blackstart::circuit
