#pragma once

// Brute-force oracles kept independent of the engine's counting structures:
// supports by scanning examples, rule coverage by direct subset tests, and a
// seeded generator of small random categorical tables.

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "lord/common.hpp"
#include "lord/dataset.hpp"
#include "lord/heuristic.hpp"

namespace testsupport {

inline bool subset_of(std::span<const lord::SelectorId> needle,
                      std::span<const lord::SelectorId> haystack) {
  return std::includes(haystack.begin(), haystack.end(), needle.begin(), needle.end());
}

/// Number of examples whose full selector set (body plus class selector)
/// contains every id of the key.
inline lord::Count brute_support(const std::vector<lord::EncodedExample>& examples,
                                 std::span<const lord::SelectorId> key) {
  lord::Count count = 0;
  for (const lord::EncodedExample& e : examples) {
    std::vector<lord::SelectorId> full(e.body);
    if (e.class_selector != lord::kNoSelector) full.push_back(e.class_selector);
    count += subset_of(key, full);
  }
  return count;
}

/// Rules covering the instance per the subset definition, by linear scan.
template <typename RuleRange>
std::vector<std::size_t> brute_covering(const RuleRange& rules,
                                        std::span<const lord::SelectorId> body) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  for (const lord::Rule& rule : rules) {
    if (subset_of(rule.body, body)) out.push_back(i);
    ++i;
  }
  return out;
}

struct RandomTableOptions {
  std::size_t max_rows = 12;
  std::size_t max_attributes = 5;
  std::size_t max_values = 3;
  std::size_t max_classes = 3;
  bool allow_missing = true;
};

inline lord::RawTable random_table(lord::SplitMix64& rng, const RandomTableOptions& opt = {}) {
  lord::RawTable table;
  const std::size_t attributes = 1 + rng.below(opt.max_attributes);
  const std::size_t rows = 1 + rng.below(opt.max_rows);
  const std::size_t classes = 1 + rng.below(opt.max_classes);
  for (std::size_t a = 0; a < attributes; ++a) table.column_names.push_back("a" + std::to_string(a));
  table.column_names.push_back("y");
  table.class_column = attributes;
  table.column_kinds.assign(attributes, lord::ColumnKind::Categorical);
  table.column_kinds.push_back(lord::ColumnKind::Class);

  std::vector<std::size_t> values_per_attribute(attributes);
  for (std::size_t a = 0; a < attributes; ++a) values_per_attribute[a] = 1 + rng.below(opt.max_values);

  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<lord::Cell> row;
    for (std::size_t a = 0; a < attributes; ++a) {
      if (opt.allow_missing && rng.below(6) == 0) {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back("v" + std::to_string(rng.below(values_per_attribute[a])));
      }
    }
    row.emplace_back("c" + std::to_string(rng.below(classes)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

/// Every selector-set of length <= max_len that is strictly ascending with at
/// most one selector per attribute (class attribute included).
inline std::vector<std::vector<lord::SelectorId>> all_valid_keys(
    const lord::SelectorDictionary& dict, std::size_t max_len) {
  std::vector<std::vector<lord::SelectorId>> keys;
  std::vector<lord::SelectorId> current;
  const auto total = static_cast<lord::SelectorId>(dict.size());

  auto extend = [&](auto&& self, lord::SelectorId from) -> void {
    for (lord::SelectorId id = from; id < total; ++id) {
      bool clash = false;
      for (lord::SelectorId used : current)
        if (dict.selector(used).attribute == dict.selector(id).attribute) clash = true;
      if (clash) continue;
      current.push_back(id);
      keys.push_back(current);
      if (current.size() < max_len) self(self, id + 1);
      current.pop_back();
    }
  };
  extend(extend, 0);
  return keys;
}

}  // namespace testsupport
