#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lord/learner.hpp"

namespace lord {

/// Assignment of rows to cross-validation folds after a seeded shuffle.
/// Folds partition the rows and their sizes differ by at most one.
struct FoldPlan {
  std::size_t fold_count = 10;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> assignment;  // fold index per row
  std::vector<std::uint32_t> order;       // rows in shuffled order
};

FoldPlan make_fold_plan(std::size_t row_count, std::size_t fold_count, std::uint64_t seed);

struct EvalReport {
  std::size_t fold_count = 0;
  std::uint64_t seed = 0;
  LearnerConfig config;
  std::vector<double> fold_accuracy;
  std::vector<std::size_t> fold_rule_count;    // filtered set incl. default rule
  std::vector<double> fold_rule_length;        // mean body length incl. default
  std::vector<std::size_t> fold_learned_rules; // before filtering
  double mean_accuracy = 0.0;
  double mean_rule_count = 0.0;
  double mean_rule_length = 0.0;
  double learn_seconds = 0.0;     // total over folds
  double classify_seconds = 0.0;  // total over folds
};

/// k-fold cross-validation: per fold, the discretizer, dictionary, counting
/// structures and rules are fitted on the training split only, then the test
/// split is classified. Training rows keep the shuffled order (which is the
/// processing order for lord_star).
EvalReport cross_validate(const RawTable& table, const FoldPlan& plan, const LearnerConfig& cfg);

/// Fraction of exact matches between predictions and ground truth.
double score(const std::vector<std::string>& predictions, const std::vector<std::string>& truths);

/// (rule count, mean body length) of a final rule set, default rule included.
std::pair<std::size_t, double> rule_stats(const RuleSet& rules);

/// Deterministic report rendering; wall times are deliberately excluded so
/// identical runs produce identical bytes. `machine` switches to tab-separated
/// lines.
std::string format_report(const EvalReport& report, bool machine = false);

/// One-line timing summary (not part of the deterministic report).
std::string format_timings(const EvalReport& report);

}  // namespace lord
