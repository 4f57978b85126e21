#pragma once

#include <cstdint>
#include <vector>

#include "lord/common.hpp"
#include "lord/dataset.hpp"

namespace lord {

/// Node of the PPC prefix tree. `pre`/`post` are the node's positions in the
/// pre-order and post-order traversals; together they encode ancestry:
/// b is an ancestor of a iff pre_b < pre_a and post_b > post_a.
struct PPCNode {
  SelectorId selector = kNoSelector;  // kNoSelector for the root
  Count freq = 0;
  std::int32_t pre = -1;
  std::int32_t post = -1;
  std::int32_t parent = -1;
  std::vector<std::int32_t> children;  // node indices, ascending by selector id
};

/// Prefix tree over the examples' reverse-O selector sequences. The tree is
/// only an intermediate: once per-selector N-lists are extracted it is dropped.
struct PPCTree {
  std::vector<PPCNode> nodes;  // nodes[0] is the root
  std::size_t selector_count = 0;

  std::size_t node_count() const { return nodes.size(); }
  const PPCNode& root() const { return nodes.front(); }
};

/// Inserts every example's full selector sequence (body then class selector)
/// in descending id order, sharing prefixes; children stay sorted by selector.
PPCTree build_tree(const EncodedDataset& dataset);

/// Assigns pre/post codes by one depth-first traversal visiting children in
/// ascending selector order. The root receives pre 0 and post node_count-1.
void assign_pp_codes(PPCTree& tree);

}  // namespace lord
