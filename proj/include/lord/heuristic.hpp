#pragma once

#include <vector>

#include "lord/common.hpp"

namespace lord {

/// A classification rule: conjunction of predictive selectors -> class selector.
/// p / n are the true/false positive counts on the training fold, h the
/// m-estimate value.
struct Rule {
  std::vector<SelectorId> body;  // ascending, at most one selector per attribute
  SelectorId head = kNoSelector;
  Count p = 0;
  Count n = 0;
  double h = 0.0;

  bool operator==(const Rule& other) const { return body == other.body && head == other.head; }
};

/// m-estimate (p + m * P/(P+N)) / (p + n + m); interpolates between precision
/// (m -> 0) and the class prior (m -> inf). The degenerate 0/0 case at m = 0
/// with zero coverage evaluates to 0.
double m_estimate(Count p, Count n, Count pos, Count neg, double m);

enum class RuleOrder { FirstBetter, SecondBetter, Equal };

/// Total preorder on rules: higher h wins; on equal h higher p wins; on equal
/// h and p the head earlier in the order O (the rarer class) wins. Heuristic
/// values are compared exactly: meaningful ties come from identical count
/// tuples and are therefore bit-identical.
RuleOrder compare_rules(const Rule& r1, const Rule& r2);

/// r1 strictly better than r2.
inline bool rule_better(const Rule& r1, const Rule& r2) {
  return compare_rules(r1, r2) == RuleOrder::FirstBetter;
}

/// Selection order used wherever one rule must be picked out of a set (rule
/// filtering, classification): the rule comparison first, then the
/// lexicographically smaller body. Makes every selection a pure function of
/// the rule set, independent of construction or traversal order.
bool preferred_over(const Rule& r1, const Rule& r2);

}  // namespace lord
