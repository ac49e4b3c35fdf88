#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wikies/concept_graph.hpp"
#include "wikies/corpus.hpp"
#include "wikies/evaluation.hpp"
#include "wikies/gp_engine.hpp"
#include "wikies/query_model.hpp"
#include "wikies/token_space.hpp"

namespace wikies {

// GP parameters plus sensitivity settings, loadable from one config file.
struct RunConfig {
  GpConfig gp;
  SensitivityConfig sens;
  bool has_seed = false;
};

// JSON object whose fields mirror GpConfig (generations, subpopulations,
// subpopulation_size, crossover_prob, mutation_prob,
// per_node_mutation_rate, initial_depth, max_crossover_depth,
// terminal_cap, seed) plus c1, c2 and matcher. Every field is optional;
// unknown fields are rejected.
RunConfig load_run_config(const std::string& path);

// Canonical JSON for the resolved configuration; load_run_config reads it
// back.
std::string write_run_config(const RunConfig& cfg);

// Config fragment carrying calibrated thresholds.
void save_sensitivity(const SensitivityConfig& sens, const std::string& path);

// Profiles for every record, graph-annotated, in corpus order.
std::vector<DocumentProfile> wiki_profiles(const std::vector<CorpusRecord>& records,
                                           const ConceptGraph& graph);

// Pairs records with their profiles as a labelled set; every record must
// carry a relevance label.
TrainingSet labeled_set(const std::vector<CorpusRecord>& records,
                        std::vector<DocumentProfile> profiles);

struct TrainResult {
  WikiEsRule rule;
  MetricsReport training_report;
};

// The full training pipeline: builds matcher-appropriate profiles (wiki
// annotation or bag-of-words), evolves the rule and scores it on its own
// training set. Exact-matcher rules get the id-to-token table of their
// terminals attached.
TrainResult train_rule(const std::vector<CorpusRecord>& records, const ConceptGraph& graph,
                       const GpConfig& cfg, const SensitivityConfig& sens,
                       const EvolveOptions& opts = {});

// A rule bound to the graph its terminals refer to: the wiki graph, or a
// token graph rebuilt from the rule's vocabulary for exact-matcher rules.
class ActiveRule {
 public:
  ActiveRule(WikiEsRule rule, const ConceptGraph& wiki);

  const WikiEsRule& rule() const { return rule_; }
  const ConceptGraph& eval_graph() const { return tokens_ ? tokens_->graph() : *wiki_; }

  DocumentProfile profile_of(const CorpusRecord& rec) const;

  double vote_on(const CorpusRecord& rec) const;
  bool classify_record(const CorpusRecord& rec) const;

  // Scores the rule over a fully labelled corpus.
  MetricsReport score_records(const std::vector<CorpusRecord>& records) const;

 private:
  WikiEsRule rule_;
  const ConceptGraph* wiki_;
  std::unique_ptr<TokenSpace> tokens_;
};

// Run provenance written next to produced artifacts.
struct RunManifest {
  std::string command;
  std::string resolved_config;
  std::vector<std::pair<std::string, std::string>> input_digests;  // path, sha256
  std::uint64_t seed = 0;
  std::vector<std::string> artifacts;
  double duration_seconds = 0.0;
};

// Atomic write (temp file + rename) of the manifest as canonical JSON.
void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace wikies
