#include "lord/persistence.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace lord {
namespace {

constexpr const char* kMagic = "lord-model";
constexpr int kVersion = 1;

ColumnKind column_kind(const Model& model, std::size_t column) {
  if (column == model.dictionary.class_column) return ColumnKind::Class;
  for (const CutPoints& c : model.cuts)
    if (c.column == column) return ColumnKind::Numeric;
  return ColumnKind::Categorical;
}

const char* kind_name(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::Categorical: return "categorical";
    case ColumnKind::Numeric: return "numeric";
    case ColumnKind::Class: return "class";
  }
  return "categorical";
}

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  bool next(std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no;
    return true;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw DataError("model file line " + std::to_string(line_no) + ": " + message);
  }
};

std::vector<std::string> split_all(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  for (;;) {
    std::size_t tab = line.find('\t', begin);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(begin));
      return fields;
    }
    fields.push_back(line.substr(begin, tab - begin));
    begin = tab + 1;
  }
}

/// First count-1 fields split on tabs; everything after the last split is the
/// final field, so names and values containing tabs survive a round trip.
std::vector<std::string> split_limited(const std::string& line, std::size_t count) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  while (fields.size() + 1 < count) {
    std::size_t tab = line.find('\t', begin);
    if (tab == std::string::npos) break;
    fields.push_back(line.substr(begin, tab - begin));
    begin = tab + 1;
  }
  fields.push_back(line.substr(begin));
  return fields;
}

long long parse_int(const LineReader& reader, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  long long value = std::strtoll(begin, &end, 10);
  if (text.empty() || end != begin + text.size())
    reader.fail("expected an integer, got '" + text + "'");
  return value;
}

double parse_float(const LineReader& reader, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size())
    reader.fail("expected a number, got '" + text + "'");
  return value;
}

void expect(const LineReader& reader, bool condition, const std::string& message) {
  if (!condition) reader.fail(message);
}

}  // namespace

std::size_t save_model(const Model& model, std::ostream& sink) {
  std::ostringstream out;
  out << kMagic << '\t' << kVersion << '\n';

  // Discretization: thresholds per numeric column, keyed by column name
  // (the name goes last so embedded tabs cannot shift earlier fields).
  out << "cuts\t" << model.cuts.size() << '\n';
  for (const CutPoints& c : model.cuts) {
    out << "cut\t" << c.thresholds.size();
    for (double t : c.thresholds) out << '\t' << repr_double(t);
    out << '\t' << model.dictionary.attribute_names[c.column] << '\n';
  }

  // Dictionary: attribute table plus all selectors in id order.
  const auto& names = model.dictionary.attribute_names;
  out << "dictionary\t" << names.size() << '\t' << model.dictionary.example_count << '\t'
      << model.dictionary.class_column << '\n';
  for (std::size_t i = 0; i < names.size(); ++i)
    out << "attribute\t" << i << '\t' << kind_name(column_kind(model, i)) << '\t' << names[i]
        << '\n';
  out << "selectors\t" << model.dictionary.selectors.size() << '\n';
  for (const Selector& s : model.dictionary.selectors)
    out << "selector\t" << s.id << '\t' << s.attribute << '\t' << s.value_index << '\t'
        << (s.group == SelectorGroup::Class ? 'c' : 'p') << '\t' << s.frequency << '\t' << s.value
        << '\n';

  // Rules in canonical (body, head) order; byte-stable across saves.
  std::vector<const Rule*> ordered;
  ordered.reserve(model.rules.size());
  for (const Rule& r : model.rules) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](const Rule* a, const Rule* b) {
    if (a->body != b->body) return a->body < b->body;
    return a->head < b->head;
  });
  out << "rules\t" << ordered.size() << '\n';
  for (const Rule* r : ordered) {
    out << "rule\t" << r->body.size();
    for (SelectorId id : r->body) out << '\t' << id;
    out << '\t' << r->head << '\t' << r->p << '\t' << r->n << '\n';
  }

  out << "default\t" << model.rules[model.default_rule].head << '\n';
  out << "m\t" << repr_double(model.m) << '\n';
  out << "variant\t" << variant_name(model.variant) << '\n';
  out << "end\n";

  const std::string text = out.str();
  sink.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!sink) throw DataError("failed to write model file");
  return text.size();
}

Model load_model(std::istream& source) {
  LineReader reader{source};
  std::string line;

  if (!reader.next(line)) reader.fail("empty model file");
  auto header = split_all(line);
  expect(reader, header.size() == 2 && header[0] == kMagic, "not a model file");
  if (parse_int(reader, header[1]) != kVersion)
    reader.fail("unsupported model version '" + header[1] + "'");

  Model model;
  // Reads the next line, checks its tag, splits it into exactly `count`
  // fields (the last one keeping embedded tabs when `tail` is set).
  auto record = [&](const char* tag, std::size_t count, bool tail = false) {
    if (!reader.next(line))
      reader.fail(std::string("unexpected end of file, expected '") + tag + "'");
    auto parts = tail ? split_limited(line, count) : split_all(line);
    expect(reader, parts.size() == count && parts[0] == tag,
           std::string("expected a '") + tag + "' record");
    return parts;
  };

  // Cuts are keyed by column name; resolution waits for the attribute table.
  const std::size_t cut_count =
      static_cast<std::size_t>(parse_int(reader, record("cuts", 2)[1]));
  std::vector<std::pair<std::string, std::vector<double>>> pending_cuts;
  for (std::size_t i = 0; i < cut_count; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of file in the cuts section");
    auto head_fields = split_all(line);
    expect(reader, head_fields.size() >= 2 && head_fields[0] == "cut", "expected a 'cut' record");
    const std::size_t k = static_cast<std::size_t>(parse_int(reader, head_fields[1]));
    auto parts = split_limited(line, 3 + k);
    expect(reader, parts.size() == 3 + k, "cut record has the wrong number of thresholds");
    std::vector<double> thresholds;
    for (std::size_t t = 0; t < k; ++t) thresholds.push_back(parse_float(reader, parts[2 + t]));
    expect(reader, std::is_sorted(thresholds.begin(), thresholds.end()),
           "cut thresholds must be ascending");
    pending_cuts.emplace_back(parts[2 + k], std::move(thresholds));
  }

  auto dict_header = record("dictionary", 4);
  const std::size_t attribute_count = static_cast<std::size_t>(parse_int(reader, dict_header[1]));
  model.dictionary.example_count = parse_int(reader, dict_header[2]);
  model.dictionary.class_column = static_cast<std::size_t>(parse_int(reader, dict_header[3]));
  expect(reader, model.dictionary.class_column < attribute_count, "class attribute out of range");
  model.dictionary.attribute_names.resize(attribute_count);
  for (std::size_t i = 0; i < attribute_count; ++i) {
    auto parts = record("attribute", 4, /*tail=*/true);
    std::size_t index = static_cast<std::size_t>(parse_int(reader, parts[1]));
    expect(reader, index < attribute_count, "attribute index out of range");
    model.dictionary.attribute_names[index] = parts[3];
  }

  for (auto& [name, thresholds] : pending_cuts) {
    auto it = std::find(model.dictionary.attribute_names.begin(),
                        model.dictionary.attribute_names.end(), name);
    expect(reader, it != model.dictionary.attribute_names.end(),
           "cut references unknown column '" + name + "'");
    CutPoints cut;
    cut.column = static_cast<std::size_t>(it - model.dictionary.attribute_names.begin());
    cut.thresholds = std::move(thresholds);
    model.cuts.push_back(std::move(cut));
  }

  const std::size_t selector_count =
      static_cast<std::size_t>(parse_int(reader, record("selectors", 2)[1]));
  model.dictionary.selectors.resize(selector_count);
  std::vector<char> seen(selector_count, 0);
  for (std::size_t i = 0; i < selector_count; ++i) {
    auto parts = record("selector", 7, /*tail=*/true);
    Selector s;
    s.id = static_cast<SelectorId>(parse_int(reader, parts[1]));
    expect(reader, s.id >= 0 && static_cast<std::size_t>(s.id) < selector_count,
           "selector id out of range");
    expect(reader, !seen[static_cast<std::size_t>(s.id)], "duplicate selector id");
    seen[static_cast<std::size_t>(s.id)] = 1;
    s.attribute = static_cast<std::size_t>(parse_int(reader, parts[2]));
    expect(reader, s.attribute < attribute_count, "selector attribute out of range");
    s.value_index = static_cast<std::size_t>(parse_int(reader, parts[3]));
    expect(reader, parts[4] == "p" || parts[4] == "c", "selector group must be 'p' or 'c'");
    s.group = parts[4] == "c" ? SelectorGroup::Class : SelectorGroup::Predictive;
    s.frequency = parse_int(reader, parts[5]);
    s.value = parts[6];
    model.dictionary.selectors[static_cast<std::size_t>(s.id)] = std::move(s);
  }
  model.dictionary.rebuild_lookup();

  // Rules are staged until the config echo arrives: the heuristic value is
  // never stored and needs m to be recomputed.
  const std::size_t rule_count =
      static_cast<std::size_t>(parse_int(reader, record("rules", 2)[1]));
  std::vector<Rule> staged;
  staged.reserve(rule_count);
  for (std::size_t i = 0; i < rule_count; ++i) {
    if (!reader.next(line)) reader.fail("unexpected end of file in the rules section");
    auto parts = split_all(line);
    expect(reader, parts.size() >= 2 && parts[0] == "rule", "expected a 'rule' record");
    const std::size_t body_len = static_cast<std::size_t>(parse_int(reader, parts[1]));
    expect(reader, parts.size() == 2 + body_len + 3, "rule record has the wrong arity");
    Rule rule;
    for (std::size_t b = 0; b < body_len; ++b) {
      SelectorId id = static_cast<SelectorId>(parse_int(reader, parts[2 + b]));
      expect(reader, id >= 0 && static_cast<std::size_t>(id) < selector_count,
             "rule references an unknown selector id");
      expect(reader, model.dictionary.selector(id).group == SelectorGroup::Predictive,
             "rule body must use predictive selectors");
      rule.body.push_back(id);
    }
    expect(reader, std::is_sorted(rule.body.begin(), rule.body.end()),
           "rule body must be ascending");
    rule.head = static_cast<SelectorId>(parse_int(reader, parts[2 + body_len]));
    expect(reader,
           rule.head >= 0 && static_cast<std::size_t>(rule.head) < selector_count &&
               model.dictionary.selector(rule.head).group == SelectorGroup::Class,
           "rule head must be a class selector");
    rule.p = parse_int(reader, parts[2 + body_len + 1]);
    rule.n = parse_int(reader, parts[2 + body_len + 2]);
    staged.push_back(std::move(rule));
  }

  const SelectorId default_head =
      static_cast<SelectorId>(parse_int(reader, record("default", 2)[1]));
  model.m = parse_float(reader, record("m", 2)[1]);
  if (model.m < 0) reader.fail("m must be non-negative");
  model.variant = parse_variant(record("variant", 2)[1]);
  record("end", 1);

  for (Rule& rule : staged) {
    const Count positives = model.dictionary.selector(rule.head).frequency;
    const Count negatives = model.dictionary.example_count - positives;
    rule.h = m_estimate(rule.p, rule.n, positives, negatives, model.m);
    if (!model.rules.insert(std::move(rule))) reader.fail("duplicate rule");
  }

  bool found = false;
  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    if (model.rules[i].body.empty() && model.rules[i].head == default_head) {
      model.default_rule = i;
      found = true;
      break;
    }
  }
  expect(reader, found, "default rule is not present in the rules section");

  for (std::size_t i = 0; i < model.rules.size(); ++i)
    model.index.insert(static_cast<std::uint32_t>(i), model.rules[i]);
  return model;
}

}  // namespace lord
