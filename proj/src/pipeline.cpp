#include "wikies/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_set>

#include <json.hpp>

#include "wikies/annotator.hpp"
#include "wikies/error.hpp"
#include "wikies/io.hpp"

namespace wikies {
namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError("config file: " + std::string(ex.what()));
  }
  if (!j.is_object()) throw ParseError("config file: expected a JSON object");

  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "generations") cfg.gp.generations = value.get<int>();
      else if (key == "subpopulations") cfg.gp.subpopulations = value.get<int>();
      else if (key == "subpopulation_size") cfg.gp.subpopulation_size = value.get<int>();
      else if (key == "crossover_prob") cfg.gp.crossover_prob = value.get<double>();
      else if (key == "mutation_prob") cfg.gp.mutation_prob = value.get<double>();
      else if (key == "per_node_mutation_rate") cfg.gp.per_node_mutation_rate = value.get<double>();
      else if (key == "initial_depth") cfg.gp.initial_depth = value.get<int>();
      else if (key == "max_crossover_depth") cfg.gp.max_crossover_depth = value.get<int>();
      else if (key == "terminal_cap") cfg.gp.terminal_cap = value.get<int>();
      else if (key == "seed") {
        cfg.gp.seed = value.get<std::uint64_t>();
        cfg.has_seed = true;
      } else if (key == "c1") cfg.sens.c1 = value.get<double>();
      else if (key == "c2") cfg.sens.c2 = value.get<double>();
      else if (key == "matcher") cfg.sens.matcher = matcher_from_name(value.get<std::string>());
      else throw ParseError("config file: unknown field '" + key + "'");
    } catch (const nlohmann::json::exception&) {
      throw ParseError("config file: field '" + key + "' has the wrong type");
    }
  }
  return cfg;
}

std::string write_run_config(const RunConfig& cfg) {
  std::string out = "{\n";
  out += "  \"generations\": " + std::to_string(cfg.gp.generations) + ",\n";
  out += "  \"subpopulations\": " + std::to_string(cfg.gp.subpopulations) + ",\n";
  out += "  \"subpopulation_size\": " + std::to_string(cfg.gp.subpopulation_size) + ",\n";
  out += "  \"crossover_prob\": " + fmt_double(cfg.gp.crossover_prob) + ",\n";
  out += "  \"mutation_prob\": " + fmt_double(cfg.gp.mutation_prob) + ",\n";
  out += "  \"per_node_mutation_rate\": " + fmt_double(cfg.gp.per_node_mutation_rate) + ",\n";
  out += "  \"initial_depth\": " + std::to_string(cfg.gp.initial_depth) + ",\n";
  out += "  \"max_crossover_depth\": " + std::to_string(cfg.gp.max_crossover_depth) + ",\n";
  out += "  \"terminal_cap\": " + std::to_string(cfg.gp.terminal_cap) + ",\n";
  out += "  \"seed\": " + std::to_string(cfg.gp.seed) + ",\n";
  out += "  \"c1\": " + fmt_double(cfg.sens.c1) + ",\n";
  out += "  \"c2\": " + fmt_double(cfg.sens.c2) + ",\n";
  out += "  \"matcher\": \"" + std::string(matcher_name(cfg.sens.matcher)) + "\"\n";
  out += "}\n";
  return out;
}

void save_sensitivity(const SensitivityConfig& sens, const std::string& path) {
  sens.check();
  std::string out = "{\n";
  out += "  \"c1\": " + fmt_double(sens.c1) + ",\n";
  out += "  \"c2\": " + fmt_double(sens.c2) + ",\n";
  out += "  \"matcher\": \"" + std::string(matcher_name(sens.matcher)) + "\"\n";
  out += "}\n";
  write_file_atomic(path, out);
}

std::vector<DocumentProfile> wiki_profiles(const std::vector<CorpusRecord>& records,
                                           const ConceptGraph& graph) {
  std::vector<DocumentProfile> profiles;
  profiles.reserve(records.size());
  for (const CorpusRecord& rec : records) profiles.push_back(profile_of_record(graph, rec));
  return profiles;
}

TrainingSet labeled_set(const std::vector<CorpusRecord>& records,
                        std::vector<DocumentProfile> profiles) {
  if (records.size() != profiles.size()) throw Error("records and profiles differ in length");
  TrainingSet set;
  set.items.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].relevance)
      throw Error("corpus is not fully labelled: doc '" + records[i].doc_id +
                  "' has no relevance");
    set.items.push_back({std::move(profiles[i]), *records[i].relevance});
  }
  return set;
}

TrainResult train_rule(const std::vector<CorpusRecord>& records, const ConceptGraph& graph,
                       const GpConfig& cfg, const SensitivityConfig& sens,
                       const EvolveOptions& opts) {
  if (records.empty()) throw Error("corpus is empty");

  TrainResult result;
  if (sens.matcher == Matcher::kExactToken) {
    TokenSpace space = TokenSpace::build(records, graph);
    std::vector<DocumentProfile> profiles;
    profiles.reserve(records.size());
    for (const CorpusRecord& rec : records) profiles.push_back(space.profile_of(rec, graph));
    TrainingSet set = labeled_set(records, std::move(profiles));
    result.rule = evolve(set, space.graph(), cfg, sens, opts);

    std::unordered_set<ConceptId> used(result.rule.terminal_set.begin(),
                                       result.rule.terminal_set.end());
    for (const auto& entry : space.vocab())
      if (used.count(entry.first)) result.rule.token_vocab.push_back(entry);
    result.training_report = score(result.rule, set, space.graph());
  } else {
    TrainingSet set = labeled_set(records, wiki_profiles(records, graph));
    result.rule = evolve(set, graph, cfg, sens, opts);
    result.training_report = score(result.rule, set, graph);
  }
  return result;
}

ActiveRule::ActiveRule(WikiEsRule rule, const ConceptGraph& wiki)
    : rule_(std::move(rule)), wiki_(&wiki) {
  if (rule_.sensitivity.matcher == Matcher::kExactToken) {
    if (rule_.token_vocab.empty())
      throw Error("exact-matcher rule carries no token vocabulary");
    tokens_ = std::make_unique<TokenSpace>(TokenSpace::from_vocab(rule_.token_vocab));
  }
  const ConceptGraph& g = eval_graph();
  for (const ScoredQuery& q : rule_.queries) {
    for (const QueryNode& node : q.tree.nodes()) {
      if (node.kind == NodeKind::kTerminal && !g.contains(node.terminal))
        throw Error("rule references concept " + std::to_string(node.terminal) +
                    " missing from the graph");
    }
  }
}

DocumentProfile ActiveRule::profile_of(const CorpusRecord& rec) const {
  return tokens_ ? tokens_->profile_of(rec, *wiki_) : profile_of_record(*wiki_, rec);
}

double ActiveRule::vote_on(const CorpusRecord& rec) const {
  return vote(rule_, eval_graph(), profile_of(rec));
}

bool ActiveRule::classify_record(const CorpusRecord& rec) const { return vote_on(rec) > 0.5; }

MetricsReport ActiveRule::score_records(const std::vector<CorpusRecord>& records) const {
  TrainingSet set;
  set.items.reserve(records.size());
  for (const CorpusRecord& rec : records) {
    if (!rec.relevance)
      throw Error("corpus is not fully labelled: doc '" + rec.doc_id + "' has no relevance");
    set.items.push_back({profile_of(rec), *rec.relevance});
  }
  return score(rule_, set, eval_graph());
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  try {
    j["config"] = nlohmann::ordered_json::parse(manifest.resolved_config);
  } catch (const nlohmann::json::exception&) {
    j["config"] = manifest.resolved_config;
  }
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [file, digest] : manifest.input_digests) inputs[file] = digest;
  j["inputs"] = inputs;
  j["seed"] = manifest.seed;
  j["artifacts"] = manifest.artifacts;
  j["duration_seconds"] = manifest.duration_seconds;
  write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace wikies
