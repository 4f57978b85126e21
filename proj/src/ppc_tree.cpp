#include "lord/ppc_tree.hpp"

#include <algorithm>

namespace lord {

PPCTree build_tree(const EncodedDataset& dataset) {
  if (dataset.examples.empty()) throw UsageError("cannot build a PPC-tree from an empty dataset");

  PPCTree tree;
  tree.selector_count = dataset.dictionary.size();
  tree.nodes.emplace_back();  // root
  tree.nodes[0].freq = static_cast<Count>(dataset.examples.size());

  std::vector<SelectorId> sequence;
  for (const EncodedExample& example : dataset.examples) {
    sequence.assign(example.body.begin(), example.body.end());
    if (example.class_selector == kNoSelector)
      throw InternalError("training example lacks a class selector");
    sequence.push_back(example.class_selector);

    std::int32_t current = 0;
    for (auto it = sequence.rbegin(); it != sequence.rend(); ++it) {
      const SelectorId s = *it;
      auto& children = tree.nodes[static_cast<std::size_t>(current)].children;
      auto pos = std::lower_bound(children.begin(), children.end(), s,
                                  [&](std::int32_t child, SelectorId value) {
                                    return tree.nodes[static_cast<std::size_t>(child)].selector < value;
                                  });
      if (pos != children.end() &&
          tree.nodes[static_cast<std::size_t>(*pos)].selector == s) {
        current = *pos;
        tree.nodes[static_cast<std::size_t>(current)].freq++;
      } else {
        std::int32_t index = static_cast<std::int32_t>(tree.nodes.size());
        // `pos` may dangle once nodes reallocates; insert before emplacing.
        children.insert(pos, index);
        PPCNode node;
        node.selector = s;
        node.freq = 1;
        node.parent = current;
        tree.nodes.push_back(std::move(node));
        current = index;
      }
    }
  }
  return tree;
}

void assign_pp_codes(PPCTree& tree) {
  std::int32_t next_pre = 0;
  std::int32_t next_post = 0;
  // Explicit stack; frame.child is the index of the next child to visit.
  struct Frame {
    std::int32_t node;
    std::size_t child;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0});
  tree.nodes[0].pre = next_pre++;
  while (!stack.empty()) {
    Frame& frame = stack.back();
    PPCNode& node = tree.nodes[static_cast<std::size_t>(frame.node)];
    if (frame.child < node.children.size()) {
      std::int32_t child = node.children[frame.child++];
      tree.nodes[static_cast<std::size_t>(child)].pre = next_pre++;
      stack.push_back({child, 0});
    } else {
      node.post = next_post++;
      stack.pop_back();
    }
  }
}

}  // namespace lord
