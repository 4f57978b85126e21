#include "lord/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lord/eval.hpp"
#include "lord/learner.hpp"
#include "lord/persistence.hpp"
#include "lord/ppc_tree.hpp"

namespace lord::cli {
namespace {

struct CommonOptions {
  std::string data_path;
  std::string class_column;
  std::string delimiter = ",";
  std::vector<std::string> missing_tokens;
  double m = 0.1;
  std::string variant = "lord";
  unsigned threads = 1;
  long long max_rule_length = 0;  // 0 = unlimited
};

void add_data_flags(CLI::App* cmd, CommonOptions& opts, bool with_class) {
  cmd->add_option("--data", opts.data_path, "input delimited text file")->required();
  if (with_class)
    cmd->add_option("--class-column", opts.class_column, "name of the class column")->required();
  cmd->add_option("--delimiter", opts.delimiter, "field delimiter (default ',')");
  cmd->add_option("--missing-token", opts.missing_tokens,
                  "token treated as a missing value (repeatable; default '?' and empty)");
}

void add_learn_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--m", opts.m, "m-estimate parameter (default 0.1)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--variant", opts.variant, "lord | lord_star | overlord")
      ->check(CLI::IsMember({"lord", "lord_star", "overlord"}));
  cmd->add_option("--threads", opts.threads, "rule-search worker count (default 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-rule-length", opts.max_rule_length,
                  "cap on rule body length (default unlimited)")
      ->check(CLI::PositiveNumber);
}

LoadOptions load_options(const CommonOptions& opts) {
  if (opts.delimiter.size() != 1) throw UsageError("--delimiter must be a single character");
  LoadOptions load;
  load.delimiter = opts.delimiter[0];
  load.class_column = opts.class_column;
  if (!opts.missing_tokens.empty()) load.missing_tokens = opts.missing_tokens;
  return load;
}

LearnerConfig learner_config(const CommonOptions& opts) {
  LearnerConfig cfg;
  cfg.m = opts.m;
  cfg.variant = parse_variant(opts.variant);
  cfg.worker_count = opts.threads;
  if (opts.max_rule_length > 0)
    cfg.max_rule_length = static_cast<std::size_t>(opts.max_rule_length);
  return cfg;
}

RawTable load_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return load_table(in, options);
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file '" + path + "'");
  return load_model(in);
}

/// Reorders prediction input columns to the model's attribute layout. The
/// class column may be absent (it is synthesized as all-missing); every other
/// model attribute must be present by name. Extra input columns are dropped.
RawTable project_to_model(const RawTable& input, const Model& model) {
  const SelectorDictionary& dict = model.dictionary;
  RawTable out;
  out.column_names = dict.attribute_names;
  out.class_column = dict.class_column;
  out.column_kinds.assign(dict.attribute_names.size(), ColumnKind::Categorical);
  out.column_kinds[dict.class_column] = ColumnKind::Class;

  std::vector<std::ptrdiff_t> source(dict.attribute_names.size(), -1);
  for (std::size_t a = 0; a < dict.attribute_names.size(); ++a) {
    auto it = std::find(input.column_names.begin(), input.column_names.end(),
                        dict.attribute_names[a]);
    if (it != input.column_names.end()) {
      source[a] = it - input.column_names.begin();
    } else if (a != dict.class_column) {
      throw DataError("input lacks column '" + dict.attribute_names[a] + "' required by the model");
    }
  }
  out.rows.reserve(input.row_count());
  for (const auto& row : input.rows) {
    std::vector<Cell> cells(dict.attribute_names.size(), std::nullopt);
    for (std::size_t a = 0; a < cells.size(); ++a)
      if (source[a] >= 0) cells[a] = row[static_cast<std::size_t>(source[a])];
    out.rows.push_back(std::move(cells));
  }
  return out;
}

int run_train(const CommonOptions& opts, const std::string& output, std::ostream& out) {
  RawTable table = load_file(opts.data_path, load_options(opts));
  const LearnerConfig cfg = learner_config(opts);
  auto start = std::chrono::steady_clock::now();
  TrainOutcome outcome = train_model(table, cfg);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ofstream sink(output, std::ios::binary);
  if (!sink) throw DataError("cannot write model file '" + output + "'");
  std::size_t bytes = save_model(outcome.model, sink);
  out << "learned " << outcome.learned_rule_count << " rules, kept "
      << outcome.model.rules.size() << " after filtering (" << bytes << " bytes, "
      << std::fixed << std::setprecision(2) << seconds << " s)\n";
  return 0;
}

int run_predict(const CommonOptions& opts, const std::string& model_path,
                const std::string& output, bool explain, std::ostream& out) {
  Model model = load_model_file(model_path);
  LoadOptions load = load_options(opts);
  load.class_column.clear();  // prediction input needs no class column
  RawTable input = load_file(opts.data_path, load);
  RawTable prepared = apply_discretizer(project_to_model(input, model), model.cuts);

  std::ofstream file_sink;
  std::ostream* sink = &out;
  if (!output.empty() && output != "-") {
    file_sink.open(output);
    if (!file_sink) throw DataError("cannot write '" + output + "'");
    sink = &file_sink;
  }
  for (std::size_t row = 0; row < prepared.row_count(); ++row) {
    EncodedExample instance = encode_instance(prepared, row, model.dictionary);
    Classification result = classify(model, instance);
    *sink << model.dictionary.selector(result.head).value;
    if (explain) *sink << '\t' << format_rule(*result.rule, model.dictionary);
    *sink << '\n';
  }
  return 0;
}

int run_evaluate(const CommonOptions& opts, std::size_t folds, std::uint64_t seed, bool machine,
                 std::ostream& out, std::ostream& err) {
  RawTable table = load_file(opts.data_path, load_options(opts));
  FoldPlan plan = make_fold_plan(table.row_count(), folds, seed);
  EvalReport report = cross_validate(table, plan, learner_config(opts));
  out << format_report(report, machine);
  err << format_timings(report);
  return 0;
}

int run_inspect(const std::string& model_path, const CommonOptions& opts, bool tree,
                std::ostream& out) {
  if (tree) {
    if (opts.data_path.empty() || opts.class_column.empty())
      throw UsageError("--tree needs --data and --class-column");
    RawTable table = load_file(opts.data_path, load_options(opts));
    RawTable discretized = apply_discretizer(table, fit_all_discretizers(table));
    SelectorDictionary dict = build_selector_dictionary(discretized);
    EncodedDataset dataset = encode_examples(discretized, std::move(dict));
    PPCTree ppc = build_tree(dataset);
    assign_pp_codes(ppc);
    // Indented depth-first dump.
    struct Frame {
      std::int32_t node;
      std::size_t depth;
    };
    std::vector<Frame> stack{{0, 0}};
    while (!stack.empty()) {
      Frame frame = stack.back();
      stack.pop_back();
      const PPCNode& node = ppc.nodes[static_cast<std::size_t>(frame.node)];
      out << std::string(frame.depth * 2, ' ');
      if (node.selector == kNoSelector)
        out << "(root)";
      else
        out << dataset.dictionary.selector_text(node.selector);
      out << "  freq=" << node.freq << "  <" << node.pre << ',' << node.post << ">\n";
      for (auto it = node.children.rbegin(); it != node.children.rend(); ++it)
        stack.push_back({*it, frame.depth + 1});
    }
    return 0;
  }

  Model model = load_model_file(model_path);
  std::vector<const Rule*> ordered;
  for (const Rule& r : model.rules) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](const Rule* a, const Rule* b) {
    if (a->h != b->h) return a->h > b->h;
    if (a->p != b->p) return a->p > b->p;
    if (a->head != b->head) return a->head < b->head;
    return a->body < b->body;
  });
  for (const Rule* r : ordered) out << format_rule(*r, model.dictionary) << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rule-based classifier learning one locally optimal rule per training example"};
  app.require_subcommand(1);

  CommonOptions train_opts;
  std::string train_output;
  CLI::App* train = app.add_subcommand("train", "learn a rule set and write a model file");
  add_data_flags(train, train_opts, /*with_class=*/true);
  add_learn_flags(train, train_opts);
  train->add_option("--output", train_output, "model file to write")->required();

  CommonOptions predict_opts;
  std::string predict_model;
  std::string predict_output;
  bool explain = false;
  CLI::App* predict = app.add_subcommand("predict", "classify rows with a trained model");
  add_data_flags(predict, predict_opts, /*with_class=*/false);
  predict->add_option("--model", predict_model, "model file")->required();
  predict->add_option("--output", predict_output, "output file (default stdout)");
  predict->add_flag("--explain", explain, "append the justifying rule to each prediction");

  CommonOptions eval_opts;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  bool machine = false;
  CLI::App* evaluate = app.add_subcommand("evaluate", "k-fold cross-validation report");
  add_data_flags(evaluate, eval_opts, /*with_class=*/true);
  add_learn_flags(evaluate, eval_opts);
  evaluate->add_option("--folds", folds, "fold count (default 10)");
  evaluate->add_option("--seed", seed, "shuffle seed (default 0)");
  evaluate->add_flag("--machine", machine, "tab-separated output");

  CommonOptions inspect_opts;
  std::string inspect_model;
  bool tree = false;
  CLI::App* inspect = app.add_subcommand("inspect", "dump a model's rules (or a PPC-tree)");
  inspect->add_option("--model", inspect_model, "model file");
  inspect->add_flag("--tree", tree, "dump the PPC-tree built from --data instead of rules");
  inspect->add_option("--data", inspect_opts.data_path, "input data (with --tree)");
  inspect->add_option("--class-column", inspect_opts.class_column, "class column (with --tree)");
  inspect->add_option("--delimiter", inspect_opts.delimiter, "field delimiter");
  inspect->add_option("--missing-token", inspect_opts.missing_tokens, "missing-value token");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream message;
    int code = app.exit(e, out, message);
    err << message.str();
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train) return run_train(train_opts, train_output, out);
    if (*predict) return run_predict(predict_opts, predict_model, predict_output, explain, out);
    if (*evaluate) return run_evaluate(eval_opts, folds, seed, machine, out, err);
    if (*inspect) {
      if (!tree && inspect_model.empty()) throw UsageError("inspect needs --model (or --tree)");
      return run_inspect(inspect_model, inspect_opts, tree, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace lord::cli
