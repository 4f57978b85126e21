#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lord/heuristic.hpp"

namespace lord {

/// Prefix tree over rule bodies. Bodies are inserted in the reverse order of
/// O, so selector ids strictly decrease along any root-to-node path; child
/// lists stay sorted ascending by selector id. Rules with empty bodies attach
/// to the root. The tree stores indices into an external rule vector.
class RTree {
 public:
  RTree() { nodes_.emplace_back(); }

  void insert(std::uint32_t rule_index, const Rule& rule);

  /// Indices of all rules whose body is a subset of the given ascending
  /// selector list (includes root-attached empty-body rules).
  void covering(std::span<const SelectorId> instance_body, std::vector<std::uint32_t>& out) const;
  std::vector<std::uint32_t> covering(std::span<const SelectorId> instance_body) const;

  /// All stored rule indices, in depth-first order.
  std::vector<std::uint32_t> all_rules() const;

  std::size_t rule_count() const { return rule_count_; }

 private:
  struct Node {
    SelectorId selector = kNoSelector;
    std::vector<std::uint32_t> children;  // node indices, ascending by selector
    std::vector<std::uint32_t> rules;     // one per head at this body
  };

  std::vector<Node> nodes_;
  std::size_t rule_count_ = 0;
};

}  // namespace lord
