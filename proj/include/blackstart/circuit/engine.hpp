#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "blackstart/circuit/network.hpp"
#include "blackstart/circuit/stamp.hpp"

namespace blackstart::circuit {

using Phases = std::array<double, 3>;

class SingularSystemError : public CircuitError {
 public:
  SingularSystemError(std::string message, std::vector<std::string> nodes)
      : CircuitError(std::move(message)), nodes_(std::move(nodes)) {}
  const std::vector<std::string>& nodes() const { return nodes_; }

 private:
  std::vector<std::string> nodes_;
};

class SolverFailure : public CircuitError {
 public:
  SolverFailure(std::string message, std::int64_t step, double time)
      : CircuitError(std::move(message)), step_(step), time_(time) {}
  std::int64_t step() const { return step_; }
  double time() const { return time_; }

 private:
  std::int64_t step_;
  double time_;
};

/// Per-phase nodal conductance matrices over the non-ground nodes, with a
/// cached LU factorization per phase. Phases share a pattern but may differ
/// in magnetizing-branch segments.
class NodalSystem {
 public:
  explicit NodalSystem(std::size_t node_count = 0);

  std::size_t node_count() const { return node_count_; }
  /// Size of the full three-phase system.
  std::size_t dimension() const { return 3 * node_count_; }

  void assemble(int phase, std::span<const Branch> branches, std::span<const BranchState> states,
                double dt);
  void solve(int phase, const Eigen::VectorXd& rhs, Eigen::VectorXd& x) const;
  const Eigen::MatrixXd& matrix(int phase) const { return matrix_[static_cast<std::size_t>(phase)]; }

 private:
  std::size_t node_count_;
  std::array<Eigen::MatrixXd, 3> matrix_;
  std::array<Eigen::PartialPivLU<Eigen::MatrixXd>, 3> lu_;
};

/// Throws SingularSystemError naming the nodes of any sub-network that has
/// no finite-conductance path to ground.
void check_grounded(const Network& network, std::span<const Branch> branches,
                    std::span<const std::string> node_names);

/// Assembles and factorizes the zero-state system of `network`.
NodalSystem assemble_system(const Network& network, double dt);

/// Snapshot of the solved state.
struct NetworkState {
  double time = 0.0;
  std::vector<Phases> node_voltages;  // index = node id, ground included (always 0)
  std::vector<std::array<BranchState, 3>> branch_states;
};

struct TopologyEvent {
  double time = 0.0;
  std::int64_t step = 0;
  std::string element_id;
  bool closed = false;
  bool no_op = false;
};

enum class Terminal { From, To };

/// Fixed-step trapezoidal EMT solver for one network. The step after a
/// discontinuity (start, breaker operation, source enable/disable) is taken
/// as two backward-Euler half steps, which damps the numerical oscillation
/// the trapezoidal rule would otherwise sustain. Instances share no state,
/// so independent engines may run on different threads.
class Engine {
 public:
  Engine(Network network, double dt);

  const Network& network() const { return network_; }
  double dt() const { return dt_; }
  double time() const { return static_cast<double>(step_) * dt_; }
  std::int64_t step_index() const { return step_; }
  std::size_t dimension() const { return system_.dimension(); }
  const NodalSystem& system() const { return system_; }

  /// Setpoints apply to the next call to step().
  void set_voltage_source(std::size_t element, const Phases& volts);
  void set_current_source(std::size_t element, const Phases& amps);
  void set_source_enabled(std::size_t element, bool enabled);
  bool source_enabled(std::size_t element) const;

  /// Swaps the breaker conductance and schedules re-factorization. Returns
  /// false (and records a warning) if the breaker is already in that state.
  bool apply_switch_event(std::string_view breaker_id, bool close);
  bool breaker_closed(std::string_view breaker_id) const;

  /// Advances one step: solves for the node voltages at time() + dt.
  void step();
  /// Marks a discontinuity in a controlled source so the next step is damped.
  void mark_discontinuity() { damp_ = {true, true, true}; }

  Phases node_voltage(NodeId node) const;
  /// Current flowing from the terminal node into the element.
  Phases terminal_current(std::size_t element, Terminal terminal = Terminal::From) const;
  /// Current a source pushes into its `from` node.
  Phases source_current(std::size_t element) const;
  /// Magnetizing-branch flux (pu of rated peak) and current (A) of a transformer.
  Phases magnetizing_flux_pu(std::size_t element) const;
  Phases magnetizing_current(std::size_t element) const;

  std::span<const Branch> branches() const { return branches_; }
  const BranchState& branch_state(std::size_t branch, int phase) const {
    return states_[static_cast<std::size_t>(phase)][branch];
  }
  NetworkState state() const;

  const std::vector<TopologyEvent>& topology_log() const { return topology_log_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  std::int64_t factorization_count() const { return factorizations_; }

 private:
  void build_rhs(int phase, Integration method);
  void update_states(int phase, Integration method);
  void solve_phase(int phase, Integration method);
  std::size_t magnetizing_branch(std::size_t element) const;
  std::pair<std::size_t, std::size_t> branch_range(std::size_t element) const;

  Network network_;
  double dt_;
  std::int64_t step_ = 0;
  std::vector<Branch> branches_;
  std::vector<std::size_t> element_first_branch_;  // size elements + 1
  std::vector<std::size_t> magnetizing_branches_;
  std::array<std::vector<BranchState>, 3> states_;
  NodalSystem system_;
  std::array<bool, 3> dirty_{true, true, true};
  std::array<bool, 3> damp_{true, true, true};
  std::array<Eigen::VectorXd, 3> voltages_;  // solved node voltages, ground excluded
  Eigen::VectorXd rhs_;
  Eigen::VectorXd trial_;
  std::vector<std::string> node_names_;
  std::vector<TopologyEvent> topology_log_;
  std::vector<std::string> warnings_;
  std::int64_t factorizations_ = 0;
};

}  // namespace blackstart::circuit
