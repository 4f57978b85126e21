#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lord/dataset.hpp"
#include "lord/heuristic.hpp"
#include "lord/nlist.hpp"
#include "lord/rtree.hpp"

namespace lord {

enum class Variant { Lord, LordStar, Overlord };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& name);

struct LearnerConfig {
  double m = 0.1;
  Variant variant = Variant::Lord;
  std::optional<std::size_t> max_rule_length;  // unlimited by default
  unsigned worker_count = 1;
};

/// Set of rules deduplicated by (body, head) identity; insertion order is
/// preserved and re-inserting an existing identity is a no-op.
class RuleSet {
 public:
  /// Returns true when the rule was new; `index` receives its position either way.
  bool insert(Rule rule, std::size_t* index = nullptr);
  bool contains(const Rule& rule) const;

  const Rule& operator[](std::size_t i) const { return rules_[i]; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  auto begin() const { return rules_.begin(); }
  auto end() const { return rules_.end(); }

 private:
  std::vector<Rule> rules_;
  std::unordered_multimap<std::size_t, std::size_t> index_;  // identity hash -> rule index
};

/// A trained classifier: discretization state, the selector dictionary, the
/// filtered rule set (default rule included) and its R-tree index.
struct Model {
  std::vector<CutPoints> cuts;
  SelectorDictionary dictionary;
  RuleSet rules;
  std::size_t default_rule = 0;  // index into rules
  RTree index;
  double m = 0.1;
  Variant variant = Variant::Lord;
};

/// Evaluates the rule `body -> head` on the fold behind `cache`: counts come
/// from N-list supports of the body and of body + head.
Rule evaluate_rule(std::span<const SelectorId> body, SelectorId head, NListCache& cache, double m);

/// Greedy specialization: starting from the empty-bodied rule, repeatedly adds
/// the best extension among the example's remaining selectors, while it
/// strictly improves the rule. Extension ties break to the smallest selector id.
Rule grow_rule(const EncodedExample& example, NListCache& cache, const LearnerConfig& cfg);

/// Greedy generalization: while the body has more than two selectors, applies
/// the best strictly-improving single removal (ties to the smallest removed id).
/// Shorter bodies return unchanged: all 1-selector bodies were already scored
/// during growth.
Rule prune_rule(const Rule& rule, NListCache& cache, const LearnerConfig& cfg);

/// One growth and one pruning phase; the overlord variant keeps alternating
/// directions while the previous phase strictly improved the rule.
Rule find_local_best(const EncodedExample& example, NListCache& cache, const LearnerConfig& cfg);

/// Maps find_local_best over all examples with cfg.worker_count workers, each
/// owning a private extension cache; results merge in example order, so the
/// output is independent of worker count and scheduling.
RuleSet learn_lord(const EncodedDataset& dataset, const SelectorNLists& seeds,
                   const LearnerConfig& cfg);

/// Sequential forward selection: learns a rule only for examples the current
/// set leaves uncovered, or misclassifies (then the new rule is added only if
/// it beats the classifying rule). Result depends on the example order.
RuleSet learn_lord_star(const EncodedDataset& dataset, const SelectorNLists& seeds,
                        const LearnerConfig& cfg);

/// Variant dispatch.
RuleSet learn_rules(const EncodedDataset& dataset, const SelectorNLists& seeds,
                    const LearnerConfig& cfg);

/// Keeps, per training example, the best covering rule with a matching head;
/// appends the default rule predicting the majority class and packages the
/// model with its R-tree. Examples with no matching-head covering rule are
/// counted in *orphaned_examples (possible only for lord_star).
Model filter_rules(const RuleSet& learned, const EncodedDataset& dataset, const LearnerConfig& cfg,
                   std::vector<CutPoints> cuts = {}, std::size_t* orphaned_examples = nullptr);

struct TrainOutcome {
  Model model;
  std::size_t learned_rule_count = 0;  // before filtering
};

/// Full training pipeline from a raw table: discretize, build the dictionary,
/// encode, count through the PPC-tree / N-lists, learn and filter.
TrainOutcome train_model(const RawTable& table, const LearnerConfig& cfg);

/// Prediction with its justifying rule.
struct Classification {
  SelectorId head = kNoSelector;
  const Rule* rule = nullptr;
};

/// Best covering rule wins; the default rule covers everything, so
/// classification is total.
Classification classify(const Model& model, const EncodedExample& instance);

/// "attr=value AND ... => class [p=.., n=.., h=..]"; empty bodies print "true".
std::string format_rule(const Rule& rule, const SelectorDictionary& dictionary);

}  // namespace lord
