#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lord/dataset.hpp"

using namespace lord;

namespace {

RawTable numeric_table(const std::vector<std::string>& values,
                       const std::vector<std::string>& classes) {
  RawTable table;
  table.column_names = {"x", "y"};
  table.column_kinds = {ColumnKind::Numeric, ColumnKind::Class};
  table.class_column = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<Cell> row;
    row.emplace_back(values[i].empty() ? Cell(std::nullopt) : Cell(values[i]));
    row.emplace_back(classes[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

TEST_CASE("constant column yields no thresholds") {
  RawTable table = numeric_table({"7", "7", "7"}, {"A", "B", "A"});
  CHECK(fit_discretizer(table, 0).thresholds.empty());
}

TEST_CASE("clean two-class split is accepted at the midpoint") {
  // Gain of the boundary between 2 and 3 is 1.0; the stopping threshold is
  // (log2(3) + log2(7) - 2) / 4 which is roughly 0.598.
  RawTable table = numeric_table({"1", "2", "3", "4"}, {"A", "A", "B", "B"});
  CutPoints cuts = fit_discretizer(table, 0);
  const double expected_threshold = (std::log2(3.0) + std::log2(7.0) - 2.0) / 4.0;
  CHECK(expected_threshold == doctest::Approx(0.598).epsilon(0.01));
  REQUIRE(cuts.thresholds.size() == 1);
  CHECK(cuts.thresholds[0] == doctest::Approx(2.5));
}

TEST_CASE("two alternating points still pass the criterion") {
  // Gain 1.0 against (log2(1) + log2(7) - 2) / 2, roughly 0.404.
  RawTable table = numeric_table({"1", "2"}, {"A", "B"});
  CutPoints cuts = fit_discretizer(table, 0);
  const double expected_threshold = (std::log2(1.0) + std::log2(7.0) - 2.0) / 2.0;
  CHECK(1.0 > expected_threshold);
  REQUIRE(cuts.thresholds.size() == 1);
  CHECK(cuts.thresholds[0] == doctest::Approx(1.5));
}

TEST_CASE("interleaved classes fail the MDL bar") {
  // Best boundary gain is about 0.311, far below the threshold of about 1.06.
  RawTable table = numeric_table({"1", "2", "3", "4"}, {"A", "B", "A", "B"});
  CHECK(fit_discretizer(table, 0).thresholds.empty());
}

TEST_CASE("missing values are excluded from fitting") {
  // The two missing rows carry classes that would wreck the clean split if
  // they were counted; the non-missing slice is 1,2,3,4 with A,A,B,B.
  RawTable table = numeric_table({"1", "x", "2", "3", "x", "4"}, {"A", "B", "A", "B", "B", "B"});
  table.rows[1][0] = std::nullopt;
  table.rows[4][0] = std::nullopt;
  CutPoints cuts = fit_discretizer(table, 0);
  REQUIRE(cuts.thresholds.size() == 1);
  CHECK(cuts.thresholds[0] == doctest::Approx(2.5));
}

TEST_CASE("fit_discretizer rejects non-numeric columns") {
  RawTable table = numeric_table({"1", "2"}, {"A", "B"});
  table.column_kinds[0] = ColumnKind::Categorical;
  CHECK_THROWS_AS(fit_discretizer(table, 0), UsageError);
}

TEST_CASE("bin labels partition the number line") {
  std::vector<double> thresholds = {2.5, 7.0};
  CHECK(bin_label(thresholds, 2.4) == "(-inf,2.5]");
  CHECK(bin_label(thresholds, 2.5) == "(-inf,2.5]");
  CHECK(bin_label(thresholds, 2.6) == "(2.5,7]");
  CHECK(bin_label(thresholds, 99.0) == "(7,+inf)");  // unseen at fit time
  CHECK(bin_label({}, 123.0) == "(-inf,+inf)");
}

TEST_CASE("apply_discretizer rewrites cells and keeps missing") {
  RawTable table = numeric_table({"1", "2", "", "4"}, {"A", "A", "B", "B"});
  table.rows[2][0] = std::nullopt;
  CutPoints cuts;
  cuts.column = 0;
  cuts.thresholds = {2.5};
  RawTable out = apply_discretizer(table, {cuts});
  CHECK(out.column_kinds[0] == ColumnKind::Categorical);
  CHECK(*out.rows[0][0] == "(-inf,2.5]");
  CHECK(*out.rows[1][0] == "(-inf,2.5]");
  CHECK_FALSE(out.rows[2][0].has_value());
  CHECK(*out.rows[3][0] == "(2.5,+inf)");
}

TEST_CASE("recursive partitioning finds nested cuts") {
  // Three pure blocks: A on 1..4, B on 5..20, A on 21..24. The first split at
  // 4.5 clears the MDL bar (gain 0.317 vs threshold 0.289); the recursion on
  // the right slice then isolates the trailing A block at 20.5.
  std::vector<std::string> values;
  std::vector<std::string> classes;
  for (int v = 1; v <= 24; ++v) {
    values.push_back(std::to_string(v));
    classes.push_back(v <= 4 || v >= 21 ? "A" : "B");
  }
  RawTable table = numeric_table(values, classes);
  CutPoints cuts = fit_discretizer(table, 0);
  REQUIRE(cuts.thresholds.size() == 2);
  CHECK(cuts.thresholds[0] == doctest::Approx(4.5));
  CHECK(cuts.thresholds[1] == doctest::Approx(20.5));
}
