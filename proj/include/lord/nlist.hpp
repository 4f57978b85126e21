#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "lord/common.hpp"
#include "lord/ppc_tree.hpp"

namespace lord {

/// Reduced PPC-node: the PP-code plus the path frequency.
struct NNode {
  std::int32_t pre = 0;
  std::int32_t post = 0;
  Count freq = 0;

  friend bool operator==(const NNode&, const NNode&) = default;
};

/// N-list of a selector-set: nodes sorted strictly ascending by pre, which
/// also sorts them strictly ascending by post. The freq sum is the set's
/// support count.
struct NList {
  std::vector<NNode> nodes;

  std::size_t size() const { return nodes.size(); }
  bool empty() const { return nodes.empty(); }
  friend bool operator==(const NList&, const NList&) = default;
};

/// Sum of node frequencies = number of training examples whose selector set
/// contains the key.
Count support(const NList& list);

/// Ascending selector ids, at most one per attribute.
using SelectorSetKey = std::vector<SelectorId>;

struct SelectorSetKeyHash {
  std::size_t operator()(const SelectorSetKey& key) const {
    std::uint64_t h = 1469598103934665603ull;
    for (SelectorId id : key) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(id));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// The immutable per-selector N-lists extracted from the PPC-tree, shared
/// read-only by all rule-search workers.
struct SelectorNLists {
  std::vector<NList> per_selector;  // indexed by selector id
  Count example_count = 0;
};

/// One pre-order traversal; each non-root node appends its reduced form to
/// its selector's list, so the lists come out pre-sorted.
SelectorNLists extract_selector_nlists(const PPCTree& tree);

/// Joins the N-list of a set ending in s_{k-1} with the N-list NL2 of a set
/// ending in s_k (the two sets differing only in that last selector): every
/// NL2 node inherits its PP-code and accumulates the frequencies of its NL1
/// descendants; zero-frequency nodes are dropped. Linear in |NL1| + |NL2|.
NList join_nlists(const NList& nl1, const NList& nl2);

/// Per-worker cache of selector-set N-lists, seeded by the shared 1-selector
/// lists. Entries are never mutated once stored; reset() drops only the
/// extensions, keeping the seed view.
class NListCache {
 public:
  explicit NListCache(const SelectorNLists& seeds) : seeds_(&seeds) {}

  const SelectorNLists& seeds() const { return *seeds_; }
  Count example_count() const { return seeds_->example_count; }

  /// Returns the cached N-list for the key, computing and caching it (and all
  /// intermediate results) on demand. Keys must be strictly ascending.
  const NList& get(std::span<const SelectorId> key);

  /// Cached entry or nullptr; never computes.
  const NList* find(std::span<const SelectorId> key) const;

  std::size_t extension_count() const { return store_.size(); }
  void reset() { store_.clear(); }

 private:
  const NList& get_unchecked(std::span<const SelectorId> key);

  const SelectorNLists* seeds_;
  std::unordered_map<SelectorSetKey, NList, SelectorSetKeyHash> store_;
};

/// Recursive N-list computation: NL1 is the list of the key minus its last
/// selector; NL2 is the cached list of the key minus its second-to-last
/// selector when available, and the plain 1-selector list otherwise.
const NList& calculate_nlist(std::span<const SelectorId> key, NListCache& cache);

}  // namespace lord
