#include "lord/heuristic.hpp"

#include <algorithm>

namespace lord {

double m_estimate(Count p, Count n, Count pos, Count neg, double m) {
  if (m < 0.0) throw UsageError("m must be non-negative");
  const double denominator = static_cast<double>(p) + static_cast<double>(n) + m;
  if (denominator == 0.0) return 0.0;
  const double prior = static_cast<double>(pos) / static_cast<double>(pos + neg);
  return (static_cast<double>(p) + m * prior) / denominator;
}

RuleOrder compare_rules(const Rule& r1, const Rule& r2) {
  if (r1.h != r2.h) return r1.h > r2.h ? RuleOrder::FirstBetter : RuleOrder::SecondBetter;
  if (r1.p != r2.p) return r1.p > r2.p ? RuleOrder::FirstBetter : RuleOrder::SecondBetter;
  if (r1.head != r2.head) return r1.head < r2.head ? RuleOrder::FirstBetter : RuleOrder::SecondBetter;
  return RuleOrder::Equal;
}

bool preferred_over(const Rule& r1, const Rule& r2) {
  switch (compare_rules(r1, r2)) {
    case RuleOrder::FirstBetter:
      return true;
    case RuleOrder::SecondBetter:
      return false;
    case RuleOrder::Equal:
      return std::lexicographical_compare(r1.body.begin(), r1.body.end(), r2.body.begin(),
                                          r2.body.end());
  }
  return false;
}

}  // namespace lord
