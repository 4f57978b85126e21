#include "lord/nlist.hpp"

#include <cassert>

namespace lord {

Count support(const NList& list) {
  Count total = 0;
  for (const NNode& node : list.nodes) total += node.freq;
  return total;
}

SelectorNLists extract_selector_nlists(const PPCTree& tree) {
  SelectorNLists out;
  out.per_selector.resize(tree.selector_count);
  out.example_count = tree.root().freq;

  std::vector<std::int32_t> stack;
  // Children are pushed in reverse so they pop in ascending-selector order,
  // i.e. ascending pre.
  for (auto it = tree.root().children.rbegin(); it != tree.root().children.rend(); ++it)
    stack.push_back(*it);
  while (!stack.empty()) {
    const PPCNode& node = tree.nodes[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    out.per_selector[static_cast<std::size_t>(node.selector)].nodes.push_back(
        {node.pre, node.post, node.freq});
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

NList join_nlists(const NList& nl1, const NList& nl2) {
  NList out;
  std::size_t i = 0;
  std::size_t j = 0;
  Count acc = 0;
  while (i < nl1.nodes.size() && j < nl2.nodes.size()) {
    const NNode& a = nl1.nodes[i];
    const NNode& b = nl2.nodes[j];
    if (a.pre < b.pre) {
      // a precedes b in pre-order, so it cannot descend from b or any later node.
      ++i;
    } else if (a.post < b.post) {
      acc += a.freq;  // a is inside b's subtree
      ++i;
    } else {
      // a lies past b's subtree; close b and keep a for the following nodes.
      if (acc > 0) {
        out.nodes.push_back({b.pre, b.post, acc});
        acc = 0;
      }
      ++j;
    }
  }
  if (acc > 0 && j < nl2.nodes.size())
    out.nodes.push_back({nl2.nodes[j].pre, nl2.nodes[j].post, acc});

#ifndef NDEBUG
  for (std::size_t k = 1; k < out.nodes.size(); ++k) {
    assert(out.nodes[k - 1].pre < out.nodes[k].pre);
    assert(out.nodes[k - 1].post < out.nodes[k].post);
  }
#endif
  return out;
}

const NList& NListCache::get(std::span<const SelectorId> key) {
  if (key.empty()) throw UsageError("selector-set key is empty");
  for (std::size_t i = 1; i < key.size(); ++i)
    if (key[i - 1] >= key[i])
      throw UsageError("selector-set key must be strictly ascending in the order O");
  if (key.front() < 0 || static_cast<std::size_t>(key.back()) >= seeds_->per_selector.size())
    throw UsageError("selector id out of range");
  return get_unchecked(key);
}

const NList* NListCache::find(std::span<const SelectorId> key) const {
  if (key.size() == 1) return &seeds_->per_selector[static_cast<std::size_t>(key[0])];
  auto it = store_.find(SelectorSetKey(key.begin(), key.end()));
  return it == store_.end() ? nullptr : &it->second;
}

const NList& NListCache::get_unchecked(std::span<const SelectorId> key) {
  if (key.size() == 1) return seeds_->per_selector[static_cast<std::size_t>(key[0])];
  SelectorSetKey owned(key.begin(), key.end());
  if (auto it = store_.find(owned); it != store_.end()) return it->second;

  const NList& nl1 = get_unchecked(key.subspan(0, key.size() - 1));
  // Preferred second operand: the set with the second-to-last selector dropped,
  // if a previous search already produced it; the 1-selector list otherwise.
  SelectorSetKey alternate(key.begin(), key.end() - 2);
  alternate.push_back(key.back());
  const NList* nl2 = find(alternate);
  if (nl2 == nullptr) nl2 = &seeds_->per_selector[static_cast<std::size_t>(key.back())];

  NList joined = join_nlists(nl1, *nl2);
  return store_.emplace(std::move(owned), std::move(joined)).first->second;
}

const NList& calculate_nlist(std::span<const SelectorId> key, NListCache& cache) {
  return cache.get(key);
}

}  // namespace lord
