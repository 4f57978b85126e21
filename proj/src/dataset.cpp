#include "lord/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace lord {
namespace {

bool parse_number(const std::string& text, double* out) {
  if (text.empty()) return false;
  const char* begin = text.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end != begin + text.size()) return false;
  if (!std::isfinite(value)) return false;
  if (out) *out = value;
  return true;
}

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == delimiter) {
      fields.push_back(strip(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(strip(field));
  return fields;
}

double entropy(const std::vector<Count>& class_counts, Count total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (Count c : class_counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

int distinct_classes(const std::vector<Count>& class_counts) {
  int k = 0;
  for (Count c : class_counts) k += c > 0;
  return k;
}

struct NumericSample {
  double value;
  int label;
};

void partition(const std::vector<NumericSample>& samples, std::size_t lo, std::size_t hi,
               std::size_t class_count, std::vector<double>& thresholds) {
  const std::size_t n = hi - lo;
  if (n < 2) return;

  std::vector<Count> total_counts(class_count, 0);
  for (std::size_t i = lo; i < hi; ++i) total_counts[static_cast<std::size_t>(samples[i].label)]++;
  const double node_entropy = entropy(total_counts, static_cast<Count>(n));

  // Scan every boundary between adjacent distinct values; keep the first cut
  // with the maximum gain so that ties resolve to the smallest threshold.
  std::vector<Count> left_counts(class_count, 0);
  std::vector<Count> best_left;
  double best_gain = -1.0;
  std::size_t best_split = 0;
  for (std::size_t i = lo; i + 1 < hi; ++i) {
    left_counts[static_cast<std::size_t>(samples[i].label)]++;
    if (samples[i].value == samples[i + 1].value) continue;
    const Count nl = static_cast<Count>(i + 1 - lo);
    const Count nr = static_cast<Count>(hi - i - 1);
    std::vector<Count> right_counts(class_count, 0);
    for (std::size_t c = 0; c < class_count; ++c) right_counts[c] = total_counts[c] - left_counts[c];
    double gain = node_entropy -
                  (static_cast<double>(nl) / static_cast<double>(n)) * entropy(left_counts, nl) -
                  (static_cast<double>(nr) / static_cast<double>(n)) * entropy(right_counts, nr);
    if (gain > best_gain) {
      best_gain = gain;
      best_split = i + 1;
      best_left = left_counts;
    }
  }
  if (best_gain < 0.0) return;  // constant slice

  std::vector<Count> right_counts(class_count, 0);
  for (std::size_t c = 0; c < class_count; ++c) right_counts[c] = total_counts[c] - best_left[c];
  const Count nl = static_cast<Count>(best_split - lo);
  const Count nr = static_cast<Count>(hi - best_split);
  const int k = distinct_classes(total_counts);
  const int k1 = distinct_classes(best_left);
  const int k2 = distinct_classes(right_counts);
  const double delta = std::log2(std::pow(3.0, k) - 2.0) -
                       (k * node_entropy - k1 * entropy(best_left, nl) - k2 * entropy(right_counts, nr));
  const double mdl = (std::log2(static_cast<double>(n) - 1.0) + delta) / static_cast<double>(n);
  if (best_gain <= mdl) return;

  thresholds.push_back((samples[best_split - 1].value + samples[best_split].value) / 2.0);
  partition(samples, lo, best_split, class_count, thresholds);
  partition(samples, best_split, hi, class_count, thresholds);
}

}  // namespace

RawTable load_table(std::istream& source, const LoadOptions& options) {
  RawTable table;
  std::string line;
  if (!std::getline(source, line)) throw DataError("input is empty, expected a header row");
  table.column_names = split_line(line, options.delimiter);
  const std::size_t arity = table.column_names.size();

  std::unordered_set<std::string> missing(options.missing_tokens.begin(), options.missing_tokens.end());

  if (!options.class_column.empty()) {
    auto it = std::find(table.column_names.begin(), table.column_names.end(), options.class_column);
    if (it == table.column_names.end())
      throw UsageError("class column '" + options.class_column + "' not found in header");
    table.class_column = static_cast<std::size_t>(it - table.column_names.begin());
  }

  std::size_t line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.empty() && source.peek() == std::istream::traits_type::eof()) break;
    std::vector<std::string> fields = split_line(line, options.delimiter);
    if (fields.size() != arity)
      throw DataError("row at line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " + std::to_string(arity));
    std::vector<Cell> row;
    row.reserve(arity);
    for (std::size_t c = 0; c < arity; ++c) {
      if (missing.count(fields[c])) {
        if (c == table.class_column)
          throw DataError("missing class value at line " + std::to_string(line_no));
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(std::move(fields[c]));
      }
    }
    table.rows.push_back(std::move(row));
  }

  // Kind inference. Unparseable non-missing cells make a column categorical.
  table.column_kinds.assign(arity, ColumnKind::Categorical);
  for (std::size_t c = 0; c < arity; ++c) {
    if (c == table.class_column) {
      table.column_kinds[c] = ColumnKind::Class;
      continue;
    }
    if (std::find(options.force_categorical.begin(), options.force_categorical.end(),
                  table.column_names[c]) != options.force_categorical.end())
      continue;
    bool numeric = false;
    for (const auto& row : table.rows) {
      if (!row[c].has_value()) continue;
      if (!parse_number(*row[c], nullptr)) {
        numeric = false;
        break;
      }
      numeric = true;
    }
    if (numeric) table.column_kinds[c] = ColumnKind::Numeric;
  }
  return table;
}

CutPoints fit_discretizer(const RawTable& table, std::size_t column) {
  if (column >= table.column_count() || table.column_kinds[column] != ColumnKind::Numeric)
    throw UsageError("fit_discretizer: column " + std::to_string(column) + " is not numeric");
  if (!table.has_class_column()) throw UsageError("fit_discretizer: table has no class column");

  std::unordered_map<std::string, int> class_index;
  std::vector<NumericSample> samples;
  samples.reserve(table.row_count());
  for (const auto& row : table.rows) {
    if (!row[column].has_value()) continue;
    double value = 0.0;
    if (!parse_number(*row[column], &value))
      throw DataError("non-numeric cell '" + *row[column] + "' in numeric column " +
                      table.column_names[column]);
    const Cell& cls = row[table.class_column];
    int label = static_cast<int>(class_index.emplace(*cls, class_index.size()).first->second);
    samples.push_back({value, label});
  }
  if (samples.empty()) throw UsageError("fit_discretizer: column has no non-missing values");

  std::sort(samples.begin(), samples.end(),
            [](const NumericSample& a, const NumericSample& b) {
              return a.value != b.value ? a.value < b.value : a.label < b.label;
            });

  CutPoints cuts;
  cuts.column = column;
  partition(samples, 0, samples.size(), class_index.size(), cuts.thresholds);
  std::sort(cuts.thresholds.begin(), cuts.thresholds.end());
  return cuts;
}

std::string bin_label(const std::vector<double>& thresholds, double value) {
  std::size_t bin = static_cast<std::size_t>(
      std::lower_bound(thresholds.begin(), thresholds.end(), value) - thresholds.begin());
  std::string lower = bin == 0 ? "-inf" : repr_double(thresholds[bin - 1]);
  std::string upper = bin == thresholds.size() ? "+inf" : repr_double(thresholds[bin]);
  return "(" + lower + "," + upper + (bin == thresholds.size() ? ")" : "]");
}

RawTable apply_discretizer(const RawTable& table, const std::vector<CutPoints>& cuts) {
  RawTable out = table;
  for (const CutPoints& cp : cuts) {
    if (cp.column >= out.column_count())
      throw UsageError("apply_discretizer: cut column out of range");
    for (auto& row : out.rows) {
      Cell& cell = row[cp.column];
      if (!cell.has_value()) continue;
      double value = 0.0;
      if (!parse_number(*cell, &value))
        throw DataError("non-numeric cell '" + *cell + "' in numeric column " +
                        out.column_names[cp.column]);
      cell = bin_label(cp.thresholds, value);
    }
    out.column_kinds[cp.column] = ColumnKind::Categorical;
  }
  return out;
}

std::vector<CutPoints> fit_all_discretizers(const RawTable& table) {
  std::vector<CutPoints> cuts;
  for (std::size_t c = 0; c < table.column_count(); ++c)
    if (table.column_kinds[c] == ColumnKind::Numeric) cuts.push_back(fit_discretizer(table, c));
  return cuts;
}

SelectorId SelectorDictionary::find(std::size_t attribute, std::string_view value) const {
  if (attribute >= lookup_.size()) return kNoSelector;
  auto it = lookup_[attribute].find(std::string(value));
  return it == lookup_[attribute].end() ? kNoSelector : it->second;
}

std::string SelectorDictionary::selector_text(SelectorId id) const {
  const Selector& s = selector(id);
  return attribute_names[s.attribute] + "=" + s.value;
}

void SelectorDictionary::rebuild_lookup() {
  lookup_.assign(attribute_names.size(), {});
  class_selector_ids.clear();
  for (const Selector& s : selectors) {
    lookup_[s.attribute].emplace(s.value, s.id);
    if (s.group == SelectorGroup::Class) class_selector_ids.push_back(s.id);
  }
  std::sort(class_selector_ids.begin(), class_selector_ids.end());
}

SelectorDictionary build_selector_dictionary(const RawTable& table) {
  if (table.row_count() == 0)
    throw DataError("cannot build a selector dictionary from an empty table");
  if (!table.has_class_column()) throw UsageError("table has no class column");

  SelectorDictionary dict;
  dict.attribute_names = table.column_names;
  dict.class_column = table.class_column;
  dict.example_count = static_cast<Count>(table.row_count());

  // One counting pass; value_index reflects first appearance within a column.
  struct Partial {
    std::size_t attribute;
    std::size_t value_index;
    std::string value;
    Count frequency;
  };
  std::vector<Partial> partials;
  std::vector<std::unordered_map<std::string, std::size_t>> seen(table.column_count());
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < table.column_count(); ++c) {
      if (!row[c].has_value()) continue;
      auto [it, inserted] = seen[c].emplace(*row[c], partials.size());
      if (inserted)
        partials.push_back({c, seen[c].size() - 1, *row[c], 1});
      else
        partials[it->second].frequency++;
    }
  }

  // Frequency-ascending order within each group, ties by (attribute, value_index);
  // class selectors follow all predictive selectors.
  std::stable_sort(partials.begin(), partials.end(), [&](const Partial& a, const Partial& b) {
    const bool a_class = a.attribute == table.class_column;
    const bool b_class = b.attribute == table.class_column;
    if (a_class != b_class) return !a_class;
    if (a.frequency != b.frequency) return a.frequency < b.frequency;
    if (a.attribute != b.attribute) return a.attribute < b.attribute;
    return a.value_index < b.value_index;
  });

  dict.selectors.reserve(partials.size());
  for (std::size_t i = 0; i < partials.size(); ++i) {
    Partial& p = partials[i];
    Selector s;
    s.id = static_cast<SelectorId>(i);
    s.attribute = p.attribute;
    s.value_index = p.value_index;
    s.value = std::move(p.value);
    s.frequency = p.frequency;
    s.group = p.attribute == table.class_column ? SelectorGroup::Class : SelectorGroup::Predictive;
    dict.selectors.push_back(std::move(s));
  }
  dict.rebuild_lookup();
  return dict;
}

namespace {

EncodedExample encode_row(const std::vector<Cell>& row, const RawTable& table,
                          const SelectorDictionary& dict, bool training) {
  EncodedExample example;
  example.body.reserve(table.column_count());
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    if (c == dict.class_column) continue;
    if (!row[c].has_value()) continue;
    SelectorId id = dict.find(c, *row[c]);
    if (id == kNoSelector) {
      if (training)
        throw InternalError("training value '" + *row[c] + "' missing from dictionary");
      continue;  // unseen test value
    }
    example.body.push_back(id);
  }
  std::sort(example.body.begin(), example.body.end());
  if (dict.class_column < table.column_count() && row.size() > dict.class_column &&
      row[dict.class_column].has_value()) {
    SelectorId id = dict.find(dict.class_column, *row[dict.class_column]);
    if (id == kNoSelector && training)
      throw InternalError("training class value '" + *row[dict.class_column] +
                          "' missing from dictionary");
    example.class_selector = id;
  } else if (training) {
    throw InternalError("training row lacks a class value");
  }
  return example;
}

}  // namespace

EncodedDataset encode_examples(const RawTable& table, SelectorDictionary dictionary) {
  EncodedDataset dataset;
  dataset.examples.reserve(table.row_count());
  for (const auto& row : table.rows)
    dataset.examples.push_back(encode_row(row, table, dictionary, /*training=*/true));
  dataset.dictionary = std::move(dictionary);
  return dataset;
}

EncodedExample encode_instance(const RawTable& table, std::size_t row,
                               const SelectorDictionary& dictionary) {
  return encode_row(table.rows.at(row), table, dictionary, /*training=*/false);
}

}  // namespace lord
