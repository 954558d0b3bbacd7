#include "blackstart/circuit/network.hpp"

#include <fmt/format.h>

namespace blackstart::circuit {

Network::Network() { nodes_.push_back({kGround, "ground", 1.0}); }

NodeId Network::add_node(std::string name, double nominal_kv) {
  if (name.empty()) {
    throw CircuitError("node name must not be empty");
  }
  if (find_node(name)) {
    throw CircuitError(fmt::format("duplicate node '{}'", name));
  }
  if (!(nominal_kv > 0.0)) {
    throw CircuitError(fmt::format("node '{}': nominal voltage must be positive", name));
  }
  const auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back({id, std::move(name), nominal_kv});
  return id;
}

std::size_t Network::add_element(Element element) {
  validate(element);
  const auto valid = [&](NodeId n) { return n >= 0 && static_cast<std::size_t>(n) < nodes_.size(); };
  if (!valid(element.from) || !valid(element.to)) {
    throw CircuitError(fmt::format("element '{}' references an unknown node", element.id));
  }
  if (find_element(element.id)) {
    throw CircuitError(fmt::format("duplicate element '{}'", element.id));
  }
  elements_.push_back(std::move(element));
  return elements_.size() - 1;
}

void Network::set_breaker_closed(std::size_t index, bool closed) {
  auto* breaker = std::get_if<Breaker>(&elements_.at(index).kind);
  if (!breaker) {
    throw CircuitError(fmt::format("element '{}' is not a breaker", elements_[index].id));
  }
  breaker->closed = closed;
}

std::optional<NodeId> Network::find_node(std::string_view name) const {
  for (const auto& n : nodes_) {
    if (n.name == name) {
      return n.id;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> Network::find_element(std::string_view id) const {
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    if (elements_[k].id == id) {
      return k;
    }
  }
  return std::nullopt;
}

NodeId Network::node_id(std::string_view name) const {
  if (auto id = find_node(name)) {
    return *id;
  }
  throw CircuitError(fmt::format("unknown node '{}'", name));
}

std::size_t Network::element_index(std::string_view id) const {
  if (auto idx = find_element(id)) {
    return *idx;
  }
  throw CircuitError(fmt::format("unknown element '{}'", id));
}

std::size_t Network::solved_node_count() const {
  std::size_t count = nodes_.size() - 1;
  for (const auto& e : elements_) {
    if (std::holds_alternative<TSection>(e.kind)) {
      ++count;
    }
  }
  return count;
}

}  // namespace blackstart::circuit
