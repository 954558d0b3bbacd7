#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blackstart/circuit/element.hpp"

namespace blackstart::circuit {

/// Three-phase busbar. Phases are implicit: every node carries a, b and c.
struct Node {
  NodeId id = kGround;
  std::string name;
  double nominal_kv = 0.0;  // line-to-line RMS
};

/// Node/element graph. Node 0 is the ground reference and always exists.
class Network {
 public:
  Network();

  NodeId add_node(std::string name, double nominal_kv);
  std::size_t add_element(Element element);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Element>& elements() const { return elements_; }
  const Node& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const Element& element(std::size_t index) const { return elements_.at(index); }

  /// Updates a breaker's stored state; throws if the element is not a breaker.
  void set_breaker_closed(std::size_t index, bool closed);

  std::optional<NodeId> find_node(std::string_view name) const;
  std::optional<std::size_t> find_element(std::string_view id) const;
  NodeId node_id(std::string_view name) const;        // throws when missing
  std::size_t element_index(std::string_view id) const;  // throws when missing

  /// Non-ground busbars plus the internal nodes T sections add.
  std::size_t solved_node_count() const;

 private:
  std::vector<Node> nodes_;
  std::vector<Element> elements_;
};

}  // namespace blackstart::circuit
