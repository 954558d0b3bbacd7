#include "blackstart/circuit/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace blackstart::circuit {
namespace {

constexpr int kMaxSegmentIterations = 8;

std::vector<std::string> solved_node_names(const Network& network) {
  std::vector<std::string> names;
  for (const auto& n : network.nodes()) {
    names.push_back(n.name);
  }
  for (const auto& e : network.elements()) {
    if (std::holds_alternative<TSection>(e.kind)) {
      names.push_back(e.id + ".mid");
    }
  }
  return names;
}

std::vector<Branch> expand_all(const Network& network, std::vector<std::size_t>* first_branch) {
  std::vector<Branch> branches;
  auto next_internal = static_cast<NodeId>(network.nodes().size());
  for (std::size_t k = 0; k < network.elements().size(); ++k) {
    if (first_branch) {
      first_branch->push_back(branches.size());
    }
    auto part = expand_element(network.element(k), k, next_internal);
    std::move(part.begin(), part.end(), std::back_inserter(branches));
  }
  if (first_branch) {
    first_branch->push_back(branches.size());
  }
  return branches;
}

bool conducts(const Branch& br) {
  switch (br.kind) {
    case BranchKind::CurrentSource:
      return false;
    case BranchKind::VoltageSource:
      return br.enabled;
    default:
      return true;
  }
}

}  // namespace

NodalSystem::NodalSystem(std::size_t node_count) : node_count_(node_count) {
  for (auto& m : matrix_) {
    m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(node_count), static_cast<Eigen::Index>(node_count));
  }
}

void NodalSystem::assemble(int phase, std::span<const Branch> branches, std::span<const BranchState> states,
                           double dt) {
  auto& m = matrix_[static_cast<std::size_t>(phase)];
  m.setZero();
  for (std::size_t k = 0; k < branches.size(); ++k) {
    const CompanionStamp s = stamp_branch(branches[k], dt, states[k]);
    for (const auto& e : s.conductances) {
      if (e.row != kGround && e.col != kGround) {
        m(e.row - 1, e.col - 1) += e.siemens;
      }
    }
  }
  lu_[static_cast<std::size_t>(phase)].compute(m);
}

void NodalSystem::solve(int phase, const Eigen::VectorXd& rhs, Eigen::VectorXd& x) const {
  x = lu_[static_cast<std::size_t>(phase)].solve(rhs);
}

void check_grounded(const Network& network, std::span<const Branch> branches,
                    std::span<const std::string> node_names) {
  std::vector<std::size_t> parent(node_names.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& br : branches) {
    if (conducts(br)) {
      parent[find(static_cast<std::size_t>(br.a))] = find(static_cast<std::size_t>(br.b));
    }
  }
  std::vector<std::string> floating;
  const auto ground = find(0);
  for (std::size_t n = 1; n < node_names.size(); ++n) {
    if (find(n) != ground) {
      floating.push_back(node_names[n]);
    }
  }
  (void)network;
  if (!floating.empty()) {
    std::string list;
    for (const auto& name : floating) {
      list += (list.empty() ? "" : ", ") + name;
    }
    throw SingularSystemError("singular nodal matrix: no path to ground from {" + list + "}",
                              std::move(floating));
  }
}

NodalSystem assemble_system(const Network& network, double dt) {
  if (!(dt > 0.0)) {
    throw CircuitError("time step must be positive");
  }
  const auto branches = expand_all(network, nullptr);
  const auto names = solved_node_names(network);
  check_grounded(network, branches, names);
  NodalSystem system(network.solved_node_count());
  std::vector<BranchState> states(branches.size());
  for (int p = 0; p < 3; ++p) {
    system.assemble(p, branches, states, dt);
  }
  return system;
}

Engine::Engine(Network network, double dt)
    : network_(std::move(network)), dt_(dt), system_(network_.solved_node_count()) {
  if (!(dt_ > 0.0)) {
    throw CircuitError("time step must be positive");
  }
  branches_ = expand_all(network_, &element_first_branch_);
  node_names_ = solved_node_names(network_);
  check_grounded(network_, branches_, node_names_);
  for (std::size_t b = 0; b < branches_.size(); ++b) {
    if (branches_[b].kind == BranchKind::Magnetizing) {
      magnetizing_branches_.push_back(b);
    }
  }
  for (auto& s : states_) {
    s.assign(branches_.size(), BranchState{});
  }
  const auto n = static_cast<Eigen::Index>(system_.node_count());
  for (auto& v : voltages_) {
    v = Eigen::VectorXd::Zero(n);
  }
  rhs_ = Eigen::VectorXd::Zero(n);
  trial_ = Eigen::VectorXd::Zero(n);
}

std::pair<std::size_t, std::size_t> Engine::branch_range(std::size_t element) const {
  if (element + 1 >= element_first_branch_.size()) {
    throw CircuitError(fmt::format("element index {} out of range", element));
  }
  return {element_first_branch_[element], element_first_branch_[element + 1]};
}

void Engine::set_voltage_source(std::size_t element, const Phases& volts) {
  const auto [first, last] = branch_range(element);
  for (std::size_t b = first; b < last; ++b) {
    if (branches_[b].kind == BranchKind::VoltageSource) {
      for (int p = 0; p < 3; ++p) {
        states_[static_cast<std::size_t>(p)][b].setpoint = volts[static_cast<std::size_t>(p)];
      }
      return;
    }
  }
  throw CircuitError(fmt::format("element '{}' is not a voltage source", network_.element(element).id));
}

void Engine::set_current_source(std::size_t element, const Phases& amps) {
  const auto [first, last] = branch_range(element);
  for (std::size_t b = first; b < last; ++b) {
    if (branches_[b].kind == BranchKind::CurrentSource) {
      for (int p = 0; p < 3; ++p) {
        states_[static_cast<std::size_t>(p)][b].setpoint = amps[static_cast<std::size_t>(p)];
      }
      return;
    }
  }
  throw CircuitError(fmt::format("element '{}' is not a current source", network_.element(element).id));
}

void Engine::set_source_enabled(std::size_t element, bool enabled) {
  const auto [first, last] = branch_range(element);
  for (std::size_t b = first; b < last; ++b) {
    auto& br = branches_[b];
    if (br.kind != BranchKind::VoltageSource || br.enabled == enabled) {
      continue;
    }
    br.enabled = enabled;
    for (std::size_t p = 0; p < 3; ++p) {
      auto& st = states_[p][b];
      st.voltage = 0.0;
      st.current = 0.0;
    }
    dirty_ = {true, true, true};
    damp_ = {true, true, true};
  }
  check_grounded(network_, branches_, node_names_);
}

bool Engine::source_enabled(std::size_t element) const {
  const auto [first, last] = branch_range(element);
  for (std::size_t b = first; b < last; ++b) {
    if (branches_[b].kind == BranchKind::VoltageSource) {
      return branches_[b].enabled;
    }
  }
  return true;
}

bool Engine::apply_switch_event(std::string_view breaker_id, bool close) {
  const auto idx = network_.find_element(breaker_id);
  if (!idx || !std::holds_alternative<Breaker>(network_.element(*idx).kind)) {
    throw CircuitError(fmt::format("unknown breaker '{}'", breaker_id));
  }
  const auto [first, last] = branch_range(*idx);
  auto& br = branches_[first];
  (void)last;
  TopologyEvent event{time(), step_, std::string(breaker_id), close, false};
  if (br.closed == close) {
    event.no_op = true;
    warnings_.push_back(fmt::format("t={:.6f}s: breaker '{}' already {}", time(), breaker_id,
                                    close ? "closed" : "open"));
    topology_log_.push_back(std::move(event));
    return false;
  }
  br.closed = close;
  network_.set_breaker_closed(*idx, close);
  dirty_ = {true, true, true};
  damp_ = {true, true, true};
  topology_log_.push_back(std::move(event));
  return true;
}

bool Engine::breaker_closed(std::string_view breaker_id) const {
  const auto idx = network_.element_index(breaker_id);
  const auto* breaker = std::get_if<Breaker>(&network_.element(idx).kind);
  if (!breaker) {
    throw CircuitError(fmt::format("element '{}' is not a breaker", breaker_id));
  }
  return breaker->closed;
}

void Engine::build_rhs(int phase, Integration method) {
  rhs_.setZero();
  const auto& states = states_[static_cast<std::size_t>(phase)];
  const auto add = [&](NodeId node, double value) {
    if (node != kGround) {
      rhs_[node - 1] += value;
    }
  };
  for (std::size_t b = 0; b < branches_.size(); ++b) {
    const auto& br = branches_[b];
    const auto& st = states[b];
    switch (br.kind) {
      case BranchKind::Conductance:
        break;
      case BranchKind::CurrentSource:
        add(br.a, st.setpoint);
        add(br.b, -st.setpoint);
        break;
      case BranchKind::VoltageSource:
        if (br.enabled) {
          add(br.a, branch_conductance(br, dt_, st) * st.setpoint + branch_history(br, dt_, st, method));
        }
        break;
      case BranchKind::Transformer: {
        const double h = branch_history(br, dt_, st, method);
        add(br.a, -h / br.ratio);
        add(br.b, h);
        break;
      }
      default: {
        const double h = branch_history(br, dt_, st, method);
        add(br.a, -h);
        add(br.b, h);
        break;
      }
    }
  }
}

void Engine::update_states(int phase, Integration method) {
  auto& states = states_[static_cast<std::size_t>(phase)];
  const auto& v = voltages_[static_cast<std::size_t>(phase)];
  const auto volt = [&](NodeId node) { return node == kGround ? 0.0 : v[node - 1]; };
  for (std::size_t b = 0; b < branches_.size(); ++b) {
    const auto& br = branches_[b];
    auto& st = states[b];
    double u = 0.0;
    switch (br.kind) {
      case BranchKind::Transformer:
        u = volt(br.a) / br.ratio - volt(br.b);
        break;
      case BranchKind::VoltageSource:
        u = br.enabled ? st.setpoint - volt(br.a) : 0.0;
        break;
      default:
        u = volt(br.a) - volt(br.b);
        break;
    }
    double i = 0.0;
    if (br.kind == BranchKind::CurrentSource) {
      i = st.setpoint;
    } else if (br.kind != BranchKind::VoltageSource || br.enabled) {
      i = branch_conductance(br, dt_, st) * u + branch_history(br, dt_, st, method);
    }
    if (br.kind == BranchKind::Magnetizing || br.kind == BranchKind::SeriesRl) {
      st.flux += 0.5 * dt_ * (method == Integration::Trapezoidal ? u + st.voltage : u);
    }
    st.voltage = u;
    st.current = i;
  }
}

void Engine::solve_phase(int p, Integration method) {
  const auto pi = static_cast<std::size_t>(p);
  auto& states = states_[pi];
  const bool trapezoidal = method == Integration::Trapezoidal;
  for (const auto b : magnetizing_branches_) {
    auto& st = states[b];
    const int seg = branches_[b].curve->segment_of(st.flux / branches_[b].flux_base);
    if (seg != st.segment) {
      st.segment = seg;
      dirty_[pi] = true;
    }
  }
  for (int iter = 0; iter < kMaxSegmentIterations; ++iter) {
    if (dirty_[pi]) {
      system_.assemble(p, branches_, states, dt_);
      dirty_[pi] = false;
      ++factorizations_;
    }
    build_rhs(p, method);
    system_.solve(p, rhs_, trial_);
    if (iter + 1 == kMaxSegmentIterations) {
      break;
    }
    bool changed = false;
    for (const auto b : magnetizing_branches_) {
      auto& st = states[b];
      const auto& br = branches_[b];
      const double va = br.a == kGround ? 0.0 : trial_[br.a - 1];
      const double vb = br.b == kGround ? 0.0 : trial_[br.b - 1];
      const double u = va - vb;
      const double flux = st.flux + 0.5 * dt_ * (trapezoidal ? u + st.voltage : u);
      const int seg = br.curve->segment_of(flux / br.flux_base);
      if (seg != st.segment) {
        st.segment = seg;
        changed = true;
      }
    }
    if (!changed) {
      break;
    }
    dirty_[pi] = true;
  }
  if (!trial_.allFinite()) {
    const double t = static_cast<double>(step_ + 1) * dt_;
    throw SolverFailure(fmt::format("non-finite node voltage at step {} (t={:.6f}s)", step_ + 1, t),
                        step_ + 1, t);
  }
  voltages_[pi] = trial_;
  update_states(p, method);
}

void Engine::step() {
  for (int p = 0; p < 3; ++p) {
    const auto pi = static_cast<std::size_t>(p);
    if (damp_[pi]) {
      solve_phase(p, Integration::BackwardEulerHalf);
      solve_phase(p, Integration::BackwardEulerHalf);
      damp_[pi] = false;
    } else {
      solve_phase(p, Integration::Trapezoidal);
    }
  }
  ++step_;
}

Phases Engine::node_voltage(NodeId node) const {
  if (node == kGround) {
    return {0.0, 0.0, 0.0};
  }
  if (node < 0 || static_cast<std::size_t>(node) > system_.node_count()) {
    throw CircuitError(fmt::format("node id {} out of range", node));
  }
  return {voltages_[0][node - 1], voltages_[1][node - 1], voltages_[2][node - 1]};
}

Phases Engine::terminal_current(std::size_t element, Terminal terminal) const {
  const auto& e = network_.element(element);
  const NodeId node = terminal == Terminal::From ? e.from : e.to;
  const auto [first, last] = branch_range(element);
  Phases out{0.0, 0.0, 0.0};
  for (std::size_t b = first; b < last; ++b) {
    const auto& br = branches_[b];
    for (std::size_t p = 0; p < 3; ++p) {
      const double i = states_[p][b].current;
      double contribution = 0.0;
      switch (br.kind) {
        case BranchKind::Transformer:
          contribution = node == br.a ? i / br.ratio : (node == br.b ? -i : 0.0);
          break;
        case BranchKind::VoltageSource:
        case BranchKind::CurrentSource:
          contribution = node == br.a ? -i : (node == br.b ? i : 0.0);
          break;
        default:
          contribution = node == br.a ? i : (node == br.b ? -i : 0.0);
          break;
      }
      out[p] += contribution;
    }
  }
  return out;
}

Phases Engine::source_current(std::size_t element) const {
  const auto [first, last] = branch_range(element);
  for (std::size_t b = first; b < last; ++b) {
    const auto kind = branches_[b].kind;
    if (kind == BranchKind::VoltageSource || kind == BranchKind::CurrentSource) {
      return {states_[0][b].current, states_[1][b].current, states_[2][b].current};
    }
  }
  throw CircuitError(fmt::format("element '{}' is not a source", network_.element(element).id));
}

std::size_t Engine::magnetizing_branch(std::size_t element) const {
  if (!std::holds_alternative<TwoWindingTransformer>(network_.element(element).kind)) {
    throw CircuitError(fmt::format("element '{}' is not a transformer", network_.element(element).id));
  }
  return branch_range(element).first + 1;
}

Phases Engine::magnetizing_flux_pu(std::size_t element) const {
  const auto b = magnetizing_branch(element);
  const double base = branches_[b].flux_base;
  return {states_[0][b].flux / base, states_[1][b].flux / base, states_[2][b].flux / base};
}

Phases Engine::magnetizing_current(std::size_t element) const {
  const auto b = magnetizing_branch(element);
  return {states_[0][b].current, states_[1][b].current, states_[2][b].current};
}

NetworkState Engine::state() const {
  NetworkState s;
  s.time = time();
  s.node_voltages.push_back({0.0, 0.0, 0.0});
  for (std::size_t n = 1; n <= system_.node_count(); ++n) {
    s.node_voltages.push_back(node_voltage(static_cast<NodeId>(n)));
  }
  s.branch_states.reserve(branches_.size());
  for (std::size_t b = 0; b < branches_.size(); ++b) {
    s.branch_states.push_back({states_[0][b], states_[1][b], states_[2][b]});
  }
  return s;
}

}  // namespace blackstart::circuit
