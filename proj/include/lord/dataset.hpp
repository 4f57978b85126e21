#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lord/common.hpp"

namespace lord {

/// A table cell; nullopt marks a missing value.
using Cell = std::optional<std::string>;

enum class ColumnKind { Categorical, Numeric, Class };

/// Tabular data as loaded from delimited text. Exactly one column is the
/// class column (except tables built for prediction, which may omit it).
struct RawTable {
  std::vector<std::string> column_names;
  std::vector<ColumnKind> column_kinds;
  std::size_t class_column = kNoClassColumn;
  std::vector<std::vector<Cell>> rows;

  static constexpr std::size_t kNoClassColumn = static_cast<std::size_t>(-1);

  std::size_t column_count() const { return column_names.size(); }
  std::size_t row_count() const { return rows.size(); }
  bool has_class_column() const { return class_column != kNoClassColumn; }
};

struct LoadOptions {
  char delimiter = ',';
  /// Name of the class column. Empty means the table has no class column
  /// (only valid for prediction inputs).
  std::string class_column;
  std::vector<std::string> missing_tokens = {"?", ""};
  /// Columns that must not be inferred as numeric.
  std::vector<std::string> force_categorical;
};

/// Parses delimited text with a header row. Column kinds are inferred:
/// a column is numeric when every non-missing cell parses fully as a number
/// and the column is neither the class column nor forced categorical.
RawTable load_table(std::istream& source, const LoadOptions& options);

/// Thresholds of one discretized numeric column, strictly increasing.
/// An empty list collapses the column into a single bin.
struct CutPoints {
  std::size_t column = 0;
  std::vector<double> thresholds;
};

/// Entropy-based recursive partitioning with the MDL stopping criterion.
/// A boundary cut is accepted only when its information gain exceeds
/// (log2(K-1) + delta) / K for the K non-missing values at the node, where
/// delta = log2(3^k - 2) - (k*H - k1*H1 - k2*H2) over the class entropies of
/// the node and its two halves. Cut values are midpoints of the adjacent
/// distinct values. Missing values never take part in fitting.
CutPoints fit_discretizer(const RawTable& table, std::size_t column);

/// Replaces numeric cells with interval labels "(-inf,t1]", "(t1,t2]", ...,
/// "(tk,+inf)". Values outside the fitted range fall into the extreme bins;
/// missing cells stay missing. Returns an all-categorical table.
RawTable apply_discretizer(const RawTable& table, const std::vector<CutPoints>& cuts);

/// Label of the bin that `value` falls into.
std::string bin_label(const std::vector<double>& thresholds, double value);

/// Fits cut points for every numeric column of the table.
std::vector<CutPoints> fit_all_discretizers(const RawTable& table);

enum class SelectorGroup { Predictive, Class };

/// One attribute=value condition. Ids are positions in the global order O:
/// predictive selectors ascending by frequency, then class selectors
/// ascending by frequency; ties broken by (attribute, value_index).
struct Selector {
  SelectorId id = kNoSelector;
  std::size_t attribute = 0;
  std::size_t value_index = 0;
  std::string value;
  Count frequency = 0;
  SelectorGroup group = SelectorGroup::Predictive;
};

struct SelectorDictionary {
  std::vector<Selector> selectors;  // indexed by id
  std::vector<std::string> attribute_names;
  std::size_t class_column = 0;
  Count example_count = 0;
  std::vector<SelectorId> class_selector_ids;  // ascending

  SelectorId find(std::size_t attribute, std::string_view value) const;
  const Selector& selector(SelectorId id) const { return selectors.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return selectors.size(); }
  /// Renders a selector as "attribute=value".
  std::string selector_text(SelectorId id) const;

  /// Rebuilds the value lookup; called after constructing selectors directly.
  void rebuild_lookup();

 private:
  friend SelectorDictionary build_selector_dictionary(const RawTable&);
  std::vector<std::unordered_map<std::string, SelectorId>> lookup_;  // per column
};

/// Counts every distinct (attribute, value) pair in one pass and assigns ids
/// by the global order O. All columns must be categorical (post-discretization).
SelectorDictionary build_selector_dictionary(const RawTable& table);

/// An example as the ascending list of its body selector ids plus its class
/// selector. Missing cells and (for test data) unseen values contribute nothing.
struct EncodedExample {
  std::vector<SelectorId> body;  // strictly ascending, at most one per attribute
  SelectorId class_selector = kNoSelector;
};

struct EncodedDataset {
  std::vector<EncodedExample> examples;
  SelectorDictionary dictionary;
};

/// Encodes a training table. Every class value must be present in the
/// dictionary; a miss is an internal error.
EncodedDataset encode_examples(const RawTable& table, SelectorDictionary dictionary);

/// Encodes a single (test) row; unseen values are dropped and the class
/// selector may be absent.
EncodedExample encode_instance(const RawTable& table, std::size_t row,
                               const SelectorDictionary& dictionary);

}  // namespace lord
