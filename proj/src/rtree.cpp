#include "lord/rtree.hpp"

#include <algorithm>

namespace lord {

void RTree::insert(std::uint32_t rule_index, const Rule& rule) {
  std::uint32_t current = 0;
  for (auto it = rule.body.rbegin(); it != rule.body.rend(); ++it) {
    const SelectorId s = *it;
    auto& children = nodes_[current].children;
    auto pos = std::lower_bound(children.begin(), children.end(), s,
                                [&](std::uint32_t child, SelectorId value) {
                                  return nodes_[child].selector < value;
                                });
    if (pos != children.end() && nodes_[*pos].selector == s) {
      current = *pos;
    } else {
      std::uint32_t index = static_cast<std::uint32_t>(nodes_.size());
      children.insert(pos, index);
      Node node;
      node.selector = s;
      nodes_.push_back(std::move(node));
      current = index;
    }
  }
  nodes_[current].rules.push_back(rule_index);
  ++rule_count_;
}

void RTree::covering(std::span<const SelectorId> instance_body,
                     std::vector<std::uint32_t>& out) const {
  // instance_body is ascending; paths descend, so we walk the body backwards.
  struct Frame {
    std::uint32_t node;
    std::size_t next;  // index into the reversed body
  };
  const std::size_t k = instance_body.size();
  std::vector<Frame> stack;
  stack.push_back({0, 0});
  while (!stack.empty()) {
    Frame frame = stack.back();
    stack.pop_back();
    const Node& node = nodes_[frame.node];
    out.insert(out.end(), node.rules.begin(), node.rules.end());
    for (std::size_t j = frame.next; j < k; ++j) {
      const SelectorId s = instance_body[k - 1 - j];
      const auto& children = node.children;
      auto pos = std::lower_bound(children.begin(), children.end(), s,
                                  [&](std::uint32_t child, SelectorId value) {
                                    return nodes_[child].selector < value;
                                  });
      if (pos != children.end() && nodes_[*pos].selector == s) stack.push_back({*pos, j + 1});
    }
  }
}

std::vector<std::uint32_t> RTree::covering(std::span<const SelectorId> instance_body) const {
  std::vector<std::uint32_t> out;
  covering(instance_body, out);
  return out;
}

std::vector<std::uint32_t> RTree::all_rules() const {
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> stack = {0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    out.insert(out.end(), node.rules.begin(), node.rules.end());
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

}  // namespace lord
