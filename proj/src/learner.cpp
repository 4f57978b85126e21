#include "lord/learner.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <iostream>
#include <thread>

#include "lord/ppc_tree.hpp"

namespace lord {
namespace {

std::size_t rule_identity_hash(const Rule& rule) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (SelectorId id : rule.body) mix(static_cast<std::uint32_t>(id));
  mix(0xfffful);
  mix(static_cast<std::uint32_t>(rule.head));
  return static_cast<std::size_t>(h);
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Lord: return "lord";
    case Variant::LordStar: return "lord_star";
    case Variant::Overlord: return "overlord";
  }
  return "lord";
}

Variant parse_variant(const std::string& name) {
  if (name == "lord") return Variant::Lord;
  if (name == "lord_star") return Variant::LordStar;
  if (name == "overlord") return Variant::Overlord;
  throw UsageError("unknown variant '" + name + "' (expected lord, lord_star or overlord)");
}

bool RuleSet::insert(Rule rule, std::size_t* index) {
  const std::size_t hash = rule_identity_hash(rule);
  auto [begin, end] = index_.equal_range(hash);
  for (auto it = begin; it != end; ++it) {
    if (rules_[it->second] == rule) {
      if (index) *index = it->second;
      return false;
    }
  }
  const std::size_t position = rules_.size();
  rules_.push_back(std::move(rule));
  index_.emplace(hash, position);
  if (index) *index = position;
  return true;
}

bool RuleSet::contains(const Rule& rule) const {
  const std::size_t hash = rule_identity_hash(rule);
  auto [begin, end] = index_.equal_range(hash);
  for (auto it = begin; it != end; ++it)
    if (rules_[it->second] == rule) return true;
  return false;
}

Rule evaluate_rule(std::span<const SelectorId> body, SelectorId head, NListCache& cache, double m) {
  const Count total = cache.example_count();
  const Count positives = support(cache.seeds().per_selector[static_cast<std::size_t>(head)]);
  const Count negatives = total - positives;

  Count body_support = total;
  if (!body.empty()) body_support = support(cache.get(body));

  SelectorSetKey with_head(body.begin(), body.end());
  with_head.push_back(head);
  const Count p = body.empty() ? positives : support(cache.get(with_head));

  Rule rule;
  rule.body.assign(body.begin(), body.end());
  rule.head = head;
  rule.p = p;
  rule.n = body_support - p;
  rule.h = m_estimate(rule.p, rule.n, positives, negatives, m);
  return rule;
}

namespace {

/// One growth phase from an existing rule; candidates are the example's
/// selectors not yet in the body.
Rule grow_phase(Rule current, const EncodedExample& example, NListCache& cache,
                const LearnerConfig& cfg) {
  std::vector<SelectorId> remaining;
  remaining.reserve(example.body.size());
  for (SelectorId s : example.body)
    if (!std::binary_search(current.body.begin(), current.body.end(), s)) remaining.push_back(s);

  const std::size_t max_length =
      cfg.max_rule_length.value_or(std::numeric_limits<std::size_t>::max());
  std::vector<SelectorId> candidate_body;
  while (!remaining.empty() && current.body.size() < max_length) {
    Rule best;
    std::size_t best_pos = 0;
    bool have_best = false;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      candidate_body = current.body;
      candidate_body.insert(
          std::lower_bound(candidate_body.begin(), candidate_body.end(), remaining[i]),
          remaining[i]);
      Rule candidate = evaluate_rule(candidate_body, current.head, cache, cfg.m);
      // Ascending iteration + strict comparison = ties go to the smallest id.
      if (!have_best || rule_better(candidate, best)) {
        best = std::move(candidate);
        best_pos = i;
        have_best = true;
      }
    }
    if (!have_best || !rule_better(best, current)) break;
    current = std::move(best);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }
  return current;
}

}  // namespace

Rule grow_rule(const EncodedExample& example, NListCache& cache, const LearnerConfig& cfg) {
  if (example.class_selector == kNoSelector)
    throw InternalError("cannot learn a rule for an example without a class selector");
  Rule empty = evaluate_rule({}, example.class_selector, cache, cfg.m);
  return grow_phase(std::move(empty), example, cache, cfg);
}

Rule prune_rule(const Rule& rule, NListCache& cache, const LearnerConfig& cfg) {
  Rule current = rule;
  std::vector<SelectorId> candidate_body;
  while (current.body.size() > 2) {
    Rule best;
    bool have_best = false;
    for (std::size_t i = 0; i < current.body.size(); ++i) {
      candidate_body = current.body;
      candidate_body.erase(candidate_body.begin() + static_cast<std::ptrdiff_t>(i));
      Rule candidate = evaluate_rule(candidate_body, current.head, cache, cfg.m);
      if (!have_best || rule_better(candidate, best)) {
        best = std::move(candidate);
        have_best = true;
      }
    }
    if (!rule_better(best, current)) break;
    current = std::move(best);
  }
  return current;
}

Rule find_local_best(const EncodedExample& example, NListCache& cache, const LearnerConfig& cfg) {
  Rule grown = grow_rule(example, cache, cfg);
  Rule pruned = prune_rule(grown, cache, cfg);
  if (cfg.variant != Variant::Overlord) return pruned;

  // Alternate directions while the previous phase improved the rule. Every
  // accepted step strictly improves the comparison key, so this terminates.
  bool improved = rule_better(pruned, grown);
  Rule current = std::move(pruned);
  bool grow_next = true;
  while (improved) {
    Rule next = grow_next ? grow_phase(current, example, cache, cfg)
                          : prune_rule(current, cache, cfg);
    improved = rule_better(next, current);
    if (improved) current = std::move(next);
    grow_next = !grow_next;
  }
  return current;
}

RuleSet learn_lord(const EncodedDataset& dataset, const SelectorNLists& seeds,
                   const LearnerConfig& cfg) {
  const std::size_t n = dataset.examples.size();
  std::vector<Rule> found(n);

  auto worker = [&](std::atomic<std::size_t>& next) {
    NListCache cache(seeds);
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      cache.reset();  // the cache is scoped to one example's search
      found[i] = find_local_best(dataset.examples[i], cache, cfg);
    }
  };

  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(1u, cfg.worker_count);
  if (workers == 1) {
    worker(next);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back([&] { worker(next); });
    for (std::thread& t : pool) t.join();
  }

  // Merging in example order keeps the result independent of scheduling.
  RuleSet rules;
  for (Rule& rule : found) rules.insert(std::move(rule));
  return rules;
}

RuleSet learn_lord_star(const EncodedDataset& dataset, const SelectorNLists& seeds,
                        const LearnerConfig& cfg) {
  RuleSet rules;
  RTree index;
  NListCache cache(seeds);
  std::vector<std::uint32_t> covering;
  for (const EncodedExample& example : dataset.examples) {
    covering.clear();
    index.covering(example.body, covering);

    if (covering.empty()) {
      cache.reset();
      Rule rule = find_local_best(example, cache, cfg);
      std::size_t position = 0;
      if (rules.insert(std::move(rule), &position))
        index.insert(static_cast<std::uint32_t>(position), rules[position]);
      continue;
    }

    std::uint32_t best = covering.front();
    for (std::size_t i = 1; i < covering.size(); ++i)
      if (preferred_over(rules[covering[i]], rules[best])) best = covering[i];
    if (rules[best].head == example.class_selector) continue;  // correctly classified

    cache.reset();
    Rule rule = find_local_best(example, cache, cfg);
    if (rule_better(rule, rules[best])) {
      std::size_t position = 0;
      if (rules.insert(std::move(rule), &position))
        index.insert(static_cast<std::uint32_t>(position), rules[position]);
    }
  }
  return rules;
}

RuleSet learn_rules(const EncodedDataset& dataset, const SelectorNLists& seeds,
                    const LearnerConfig& cfg) {
  return cfg.variant == Variant::LordStar ? learn_lord_star(dataset, seeds, cfg)
                                          : learn_lord(dataset, seeds, cfg);
}

namespace {

RTree build_rtree(const RuleSet& rules) {
  RTree tree;
  for (std::size_t i = 0; i < rules.size(); ++i)
    tree.insert(static_cast<std::uint32_t>(i), rules[i]);
  return tree;
}

}  // namespace

Model filter_rules(const RuleSet& learned, const EncodedDataset& dataset, const LearnerConfig& cfg,
                   std::vector<CutPoints> cuts, std::size_t* orphaned_examples) {
  const SelectorDictionary& dict = dataset.dictionary;
  RTree scratch = build_rtree(learned);

  std::vector<char> keep(learned.size(), 0);
  std::size_t orphaned = 0;
  std::vector<std::uint32_t> covering;
  for (const EncodedExample& example : dataset.examples) {
    covering.clear();
    scratch.covering(example.body, covering);
    std::int64_t best = -1;
    for (std::uint32_t r : covering) {
      if (learned[r].head != example.class_selector) continue;
      if (best < 0 || preferred_over(learned[r], learned[static_cast<std::size_t>(best)])) best = r;
    }
    if (best < 0) {
      ++orphaned;  // possible under lord_star; the default rule picks these up
      continue;
    }
    keep[static_cast<std::size_t>(best)] = 1;
  }
  if (orphaned_examples) *orphaned_examples = orphaned;
  if (orphaned > 0 && !orphaned_examples)
    std::cerr << "warning: " << orphaned
              << " training example(s) had no covering rule of their own class during filtering\n";

  Model model;
  model.cuts = std::move(cuts);
  model.dictionary = dict;
  model.m = cfg.m;
  model.variant = cfg.variant;
  for (std::size_t i = 0; i < learned.size(); ++i)
    if (keep[i]) model.rules.insert(learned[i]);

  // Default rule: empty body, majority training class. A frequency tie picks
  // the class latest in the order O.
  SelectorId majority = kNoSelector;
  for (SelectorId id : dict.class_selector_ids)
    if (majority == kNoSelector || dict.selector(id).frequency >= dict.selector(majority).frequency)
      majority = id;
  if (majority == kNoSelector) throw InternalError("dataset has no class selectors");
  const Count positives = dict.selector(majority).frequency;
  Rule default_rule;
  default_rule.head = majority;
  default_rule.p = positives;
  default_rule.n = dict.example_count - positives;
  default_rule.h = m_estimate(default_rule.p, default_rule.n, positives,
                              dict.example_count - positives, cfg.m);
  model.rules.insert(std::move(default_rule), &model.default_rule);

  model.index = build_rtree(model.rules);
  return model;
}

TrainOutcome train_model(const RawTable& table, const LearnerConfig& cfg) {
  std::vector<CutPoints> cuts = fit_all_discretizers(table);
  const RawTable discretized = apply_discretizer(table, cuts);
  SelectorDictionary dict = build_selector_dictionary(discretized);
  EncodedDataset dataset = encode_examples(discretized, std::move(dict));

  SelectorNLists seeds;
  {
    PPCTree tree = build_tree(dataset);
    assign_pp_codes(tree);
    seeds = extract_selector_nlists(tree);
  }  // the tree is no longer needed once the N-lists exist

  RuleSet learned = learn_rules(dataset, seeds, cfg);
  TrainOutcome outcome;
  outcome.learned_rule_count = learned.size();
  outcome.model = filter_rules(learned, dataset, cfg, std::move(cuts));
  return outcome;
}

std::string format_rule(const Rule& rule, const SelectorDictionary& dictionary) {
  std::string text;
  if (rule.body.empty()) {
    text = "true";
  } else {
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      if (i > 0) text += " AND ";
      text += dictionary.selector_text(rule.body[i]);
    }
  }
  text += " => " + dictionary.selector_text(rule.head);
  text += " [p=" + std::to_string(rule.p) + ", n=" + std::to_string(rule.n) +
          ", h=" + repr_double(rule.h) + "]";
  return text;
}

Classification classify(const Model& model, const EncodedExample& instance) {
  std::vector<std::uint32_t> covering = model.index.covering(instance.body);
  // The default rule is a fallback, not a contestant: it decides only when no
  // learned rule covers the instance.
  std::int64_t best = -1;
  for (std::uint32_t r : covering) {
    if (r == model.default_rule) continue;
    if (best < 0 || preferred_over(model.rules[r], model.rules[static_cast<std::size_t>(best)]))
      best = r;
  }
  if (best < 0) best = static_cast<std::int64_t>(model.default_rule);
  const Rule& rule = model.rules[static_cast<std::size_t>(best)];
  return {rule.head, &rule};
}

}  // namespace lord
