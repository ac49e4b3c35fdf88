#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wikies/annotator.hpp"
#include "wikies/corpus.hpp"
#include "wikies/digest.hpp"
#include "wikies/error.hpp"
#include "wikies/evaluation.hpp"
#include "wikies/gp_engine.hpp"
#include "wikies/pipeline.hpp"
#include "wikies/query_model.hpp"

namespace {

using namespace wikies;

// Argument misuse that CLI11 cannot catch itself; exits with status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::vector<double> parse_grid_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(flag + ": cannot parse '" + item + "' as a number");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

std::string fmt_mu(double mu) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", mu);
  return buf;
}

struct TrainArgs {
  std::string graph;
  std::string corpus;
  std::string out;
  std::string config;
  std::string qrels;
  std::string matcher;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
};

void add_qrels_labels(const std::string& qrels, std::vector<CorpusRecord>& records) {
  if (!qrels.empty()) apply_qrels(qrels, records);
}

void run_train(const TrainArgs& args, bool force_exact, const std::string& command) {
  Timer timer;

  RunConfig cfg;
  if (!args.config.empty()) cfg = load_run_config(args.config);
  if (args.seed_given) {
    cfg.gp.seed = args.seed;
    cfg.has_seed = true;
  }
  if (!args.matcher.empty()) cfg.sens.matcher = matcher_from_name(args.matcher);
  if (force_exact) cfg.sens.matcher = Matcher::kExactToken;
  if (!cfg.has_seed) throw UsageError("a seed is required: pass --seed or set it in --config");

  ConceptGraph graph = ConceptGraph::load(args.graph);
  std::vector<CorpusRecord> records = load_corpus(args.corpus);
  add_qrels_labels(args.qrels, records);

  EvolveOptions opts;
  opts.threads = args.threads;
  TrainResult result = train_rule(records, graph, cfg.gp, cfg.sens, opts);
  save_rule(result.rule, args.out);
  std::cout << format_report(result.training_report);

  RunManifest manifest;
  manifest.command = command;
  manifest.resolved_config = write_run_config(cfg);
  manifest.input_digests.emplace_back(args.graph, sha256_file(args.graph));
  manifest.input_digests.emplace_back(args.corpus, sha256_file(args.corpus));
  if (!args.config.empty())
    manifest.input_digests.emplace_back(args.config, sha256_file(args.config));
  if (!args.qrels.empty())
    manifest.input_digests.emplace_back(args.qrels, sha256_file(args.qrels));
  manifest.seed = cfg.gp.seed;
  manifest.artifacts.push_back(args.out);
  manifest.duration_seconds = timer.seconds();
  write_manifest(manifest, args.out + ".manifest.json");
}

struct FilterArgs {
  std::string rule;
  std::string graph;
  std::string corpus;
  bool with_scores = false;
};

void run_filter(const FilterArgs& args) {
  ConceptGraph graph = ConceptGraph::load(args.graph);
  ActiveRule active(load_rule(args.rule), graph);
  for (const CorpusRecord& rec : load_corpus(args.corpus)) {
    double mu = active.vote_on(rec);
    if (mu > 0.5) {
      std::cout << rec.doc_id;
      if (args.with_scores) std::cout << '\t' << fmt_mu(mu);
      std::cout << '\n';
    }
  }
}

struct EvalArgs {
  std::string rule;
  std::string graph;
  std::string corpus;
  std::string qrels;
  std::vector<std::string> compare;
};

void run_eval(const EvalArgs& args) {
  if (!args.rule.empty() && !args.compare.empty())
    throw UsageError("pass either --rule or --compare, not both");
  if (args.rule.empty() && args.compare.empty())
    throw UsageError("one of --rule or --compare is required");
  if (!args.compare.empty() && args.compare.size() < 2)
    throw UsageError("--compare needs at least 2 rule files");

  ConceptGraph graph = ConceptGraph::load(args.graph);
  std::vector<CorpusRecord> records = load_corpus(args.corpus);
  add_qrels_labels(args.qrels, records);

  if (!args.rule.empty()) {
    ActiveRule active(load_rule(args.rule), graph);
    std::cout << format_report(active.score_records(records));
    return;
  }

  std::vector<NamedReport> reports;
  for (const std::string& path : args.compare) {
    ActiveRule active(load_rule(path), graph);
    NamedReport named;
    named.name = std::filesystem::path(path).stem().string();
    named.report = active.score_records(records);
    reports.push_back(std::move(named));
  }
  for (const NamedReport& named : reports) {
    std::cout << named.name << ":\n" << format_report(named.report) << "\n";
  }
  std::cout << format_matrix(compare(reports));
}

struct CalibrateArgs {
  std::string graph;
  std::string corpus;
  std::string out;
  std::string config;
  std::string qrels;
  std::string grid_c1;
  std::string grid_c2;
};

void run_calibrate(const CalibrateArgs& args) {
  Timer timer;

  int terminal_cap = GpConfig{}.terminal_cap;
  if (!args.config.empty()) terminal_cap = load_run_config(args.config).gp.terminal_cap;

  ThresholdGrid grid;
  if (!args.grid_c1.empty()) grid.c1 = parse_grid_list(args.grid_c1, "--grid-c1");
  if (!args.grid_c2.empty()) grid.c2 = parse_grid_list(args.grid_c2, "--grid-c2");

  ConceptGraph graph = ConceptGraph::load(args.graph);
  std::vector<CorpusRecord> records = load_corpus(args.corpus);
  add_qrels_labels(args.qrels, records);
  TrainingSet set = labeled_set(records, wiki_profiles(records, graph));

  SensitivityConfig sens = calibrate_thresholds(set, graph, grid, terminal_cap);
  save_sensitivity(sens, args.out);
  std::printf("c1 %.12g\nc2 %.12g\n", sens.c1, sens.c2);

  RunManifest manifest;
  manifest.command = "calibrate";
  RunConfig resolved;
  resolved.sens = sens;
  resolved.gp.terminal_cap = terminal_cap;
  manifest.resolved_config = write_run_config(resolved);
  manifest.input_digests.emplace_back(args.graph, sha256_file(args.graph));
  manifest.input_digests.emplace_back(args.corpus, sha256_file(args.corpus));
  if (!args.config.empty())
    manifest.input_digests.emplace_back(args.config, sha256_file(args.config));
  if (!args.qrels.empty())
    manifest.input_digests.emplace_back(args.qrels, sha256_file(args.qrels));
  manifest.artifacts.push_back(args.out);
  manifest.duration_seconds = timer.seconds();
  write_manifest(manifest, args.out + ".manifest.json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learns and applies boolean concept queries for document filtering"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto add_train_flags = [&](CLI::App* sub) {
    sub->add_option("--graph", train_args.graph, "concept graph file")->required();
    sub->add_option("--corpus", train_args.corpus, "labelled corpus file")->required();
    sub->add_option("--out", train_args.out, "rule file to write")->required();
    sub->add_option("--config", train_args.config, "config file");
    sub->add_option("--qrels", train_args.qrels, "qrels-style relevance file");
    sub->add_option("--seed", train_args.seed, "random seed");
    sub->add_option("--threads", train_args.threads, "worker thread cap");
  };
  CLI::App* train = app.add_subcommand("train", "evolve a rule from a labelled corpus");
  add_train_flags(train);
  train->add_option("--matcher", train_args.matcher, "wiki or exact")
      ->check(CLI::IsMember({"wiki", "exact"}));
  CLI::App* baseline =
      app.add_subcommand("baseline", "evolve an exact-token (bag-of-words) rule");
  add_train_flags(baseline);

  FilterArgs filter_args;
  CLI::App* filter = app.add_subcommand("filter", "list documents matching a rule");
  filter->add_option("--rule", filter_args.rule, "rule file")->required();
  filter->add_option("--graph", filter_args.graph, "concept graph file")->required();
  filter->add_option("--corpus", filter_args.corpus, "corpus file")->required();
  filter->add_flag("--with-scores", filter_args.with_scores, "append the vote to each line");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "score rules against a labelled corpus");
  eval->add_option("--rule", eval_args.rule, "rule file");
  eval->add_option("--graph", eval_args.graph, "concept graph file")->required();
  eval->add_option("--corpus", eval_args.corpus, "labelled corpus file")->required();
  eval->add_option("--qrels", eval_args.qrels, "qrels-style relevance file");
  eval->add_option("--compare", eval_args.compare, "rule files to compare");

  CalibrateArgs cal_args;
  CLI::App* calibrate = app.add_subcommand("calibrate", "grid-search sensitivity thresholds");
  calibrate->add_option("--graph", cal_args.graph, "concept graph file")->required();
  calibrate->add_option("--corpus", cal_args.corpus, "labelled corpus file")->required();
  calibrate->add_option("--out", cal_args.out, "config file to write")->required();
  calibrate->add_option("--config", cal_args.config, "config file (terminal cap)");
  calibrate->add_option("--qrels", cal_args.qrels, "qrels-style relevance file");
  calibrate->add_option("--grid-c1", cal_args.grid_c1, "comma-separated c1 grid");
  calibrate->add_option("--grid-c2", cal_args.grid_c2, "comma-separated c2 grid");

  try {
    app.parse(argc, argv);
    train_args.seed_given = train->count("--seed") > 0 || baseline->count("--seed") > 0;

    if (train->parsed()) run_train(train_args, false, "train");
    else if (baseline->parsed()) run_train(train_args, true, "baseline");
    else if (filter->parsed()) run_filter(filter_args);
    else if (eval->parsed()) run_eval(eval_args);
    else if (calibrate->parsed()) run_calibrate(cal_args);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
