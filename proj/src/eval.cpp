#include "lord/eval.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace lord {
namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

}  // namespace

FoldPlan make_fold_plan(std::size_t row_count, std::size_t fold_count, std::uint64_t seed) {
  if (fold_count < 2) throw UsageError("cross-validation needs at least 2 folds");
  if (fold_count > row_count)
    throw UsageError("more folds than rows (" + std::to_string(fold_count) + " > " +
                     std::to_string(row_count) + ")");
  FoldPlan plan;
  plan.fold_count = fold_count;
  plan.seed = seed;
  plan.order.resize(row_count);
  std::iota(plan.order.begin(), plan.order.end(), 0u);
  SplitMix64 rng(seed);
  for (std::size_t i = row_count; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(plan.order[i - 1], plan.order[j]);
  }
  plan.assignment.resize(row_count);
  for (std::size_t i = 0; i < row_count; ++i)
    plan.assignment[plan.order[i]] = static_cast<std::uint32_t>(i % fold_count);
  return plan;
}

double score(const std::vector<std::string>& predictions, const std::vector<std::string>& truths) {
  if (predictions.size() != truths.size())
    throw UsageError("predictions and truths differ in length");
  if (predictions.empty()) throw UsageError("nothing to score");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) hits += predictions[i] == truths[i];
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

std::pair<std::size_t, double> rule_stats(const RuleSet& rules) {
  std::size_t total_length = 0;
  for (const Rule& r : rules) total_length += r.body.size();
  double mean_length =
      rules.empty() ? 0.0 : static_cast<double>(total_length) / static_cast<double>(rules.size());
  return {rules.size(), mean_length};
}

EvalReport cross_validate(const RawTable& table, const FoldPlan& plan, const LearnerConfig& cfg) {
  if (!table.has_class_column()) throw UsageError("cross-validation needs a class column");
  if (plan.assignment.size() != table.row_count())
    throw UsageError("fold plan does not match the table row count");

  EvalReport report;
  report.fold_count = plan.fold_count;
  report.seed = plan.seed;
  report.config = cfg;

  for (std::size_t fold = 0; fold < plan.fold_count; ++fold) {
    RawTable train;
    RawTable test;
    train.column_names = test.column_names = table.column_names;
    train.column_kinds = test.column_kinds = table.column_kinds;
    train.class_column = test.class_column = table.class_column;
    for (std::uint32_t row : plan.order) {
      if (plan.assignment[row] == fold)
        test.rows.push_back(table.rows[row]);
      else
        train.rows.push_back(table.rows[row]);
    }
    if (test.rows.empty() || train.rows.empty())
      throw UsageError("fold " + std::to_string(fold) + " has an empty split");

    auto learn_start = std::chrono::steady_clock::now();
    TrainOutcome outcome = train_model(train, cfg);
    report.learn_seconds += seconds_since(learn_start);
    const Model& model = outcome.model;

    // Classes absent from this training split can never be predicted.
    std::unordered_set<std::string> train_classes;
    for (SelectorId id : model.dictionary.class_selector_ids)
      train_classes.insert(model.dictionary.selector(id).value);

    auto classify_start = std::chrono::steady_clock::now();
    RawTable prepared = apply_discretizer(test, model.cuts);
    std::vector<std::string> predictions;
    std::vector<std::string> truths;
    std::size_t unseen_classes = 0;
    predictions.reserve(prepared.row_count());
    for (std::size_t row = 0; row < prepared.row_count(); ++row) {
      EncodedExample instance = encode_instance(prepared, row, model.dictionary);
      Classification result = classify(model, instance);
      predictions.push_back(model.dictionary.selector(result.head).value);
      const Cell& truth = prepared.rows[row][table.class_column];
      truths.push_back(truth.value_or(""));
      if (truth.has_value() && !train_classes.count(*truth)) ++unseen_classes;
    }
    report.classify_seconds += seconds_since(classify_start);
    if (unseen_classes > 0)
      std::cerr << "warning: fold " << fold + 1 << ": " << unseen_classes
                << " test row(s) carry a class absent from the training split\n";

    report.fold_accuracy.push_back(score(predictions, truths));
    auto [count, length] = rule_stats(model.rules);
    report.fold_rule_count.push_back(count);
    report.fold_rule_length.push_back(length);
    report.fold_learned_rules.push_back(outcome.learned_rule_count);
  }

  report.mean_accuracy = mean(report.fold_accuracy);
  report.mean_rule_length = mean(report.fold_rule_length);
  double count_sum = 0.0;
  for (std::size_t c : report.fold_rule_count) count_sum += static_cast<double>(c);
  report.mean_rule_count = count_sum / static_cast<double>(report.fold_rule_count.size());
  return report;
}

std::string format_report(const EvalReport& report, bool machine) {
  std::ostringstream out;
  if (machine) {
    out << "fold\taccuracy\trules\tmean_rule_length\n";
    for (std::size_t i = 0; i < report.fold_accuracy.size(); ++i)
      out << i + 1 << '\t' << repr_double(report.fold_accuracy[i]) << '\t'
          << report.fold_rule_count[i] << '\t' << repr_double(report.fold_rule_length[i]) << '\n';
    out << "mean\t" << repr_double(report.mean_accuracy) << '\t'
        << repr_double(report.mean_rule_count) << '\t' << repr_double(report.mean_rule_length)
        << '\n';
    return out.str();
  }

  out << report.fold_count << "-fold cross-validation (seed " << report.seed << ", variant "
      << variant_name(report.config.variant) << ", m " << repr_double(report.config.m)
      << ", threads " << report.config.worker_count << ")\n";
  out << "fold   accuracy    rules   mean_len\n";
  for (std::size_t i = 0; i < report.fold_accuracy.size(); ++i) {
    out << std::setw(4) << i + 1 << "   " << fixed(report.fold_accuracy[i], 6) << "   "
        << std::setw(6) << report.fold_rule_count[i] << "   " << fixed(report.fold_rule_length[i], 3)
        << '\n';
  }
  out << "mean   " << fixed(report.mean_accuracy, 6) << "   " << std::setw(6)
      << static_cast<long long>(std::llround(report.mean_rule_count)) << "   "
      << fixed(report.mean_rule_length, 3) << '\n';
  return out.str();
}

std::string format_timings(const EvalReport& report) {
  std::ostringstream out;
  out << "learning " << fixed(report.learn_seconds, 3) << " s, classification "
      << fixed(report.classify_seconds, 3) << " s\n";
  return out.str();
}

}  // namespace lord
