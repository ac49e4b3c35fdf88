#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "wikies/concept_graph.hpp"
#include "wikies/document_profile.hpp"
#include "wikies/query_model.hpp"
#include "wikies/rng.hpp"

namespace wikies {

struct GpConfig {
  int generations = 250;
  int subpopulations = 10;
  int subpopulation_size = 100;
  double crossover_prob = 0.9;
  double mutation_prob = 0.9;
  double per_node_mutation_rate = 0.1;
  int initial_depth = 4;
  int max_crossover_depth = 8;
  int terminal_cap = 15;
  std::uint64_t seed = 0;

  void check() const;
};

struct TrainingItem {
  DocumentProfile profile;
  int relevance = 0;
};

struct TrainingSet {
  std::vector<TrainingItem> items;

  std::size_t relevant_count() const;
  // Rejects sets lacking a relevant or an irrelevant document.
  void check() const;
};

struct Individual {
  QueryTree tree;
  double fitness = 0.0;
};

// Ranks a before b: higher fitness, then fewer nodes. Shared by
// tournaments, replacement and elite picks.
bool fitter(const Individual& a, const Individual& b);

// Up to k concept ids ranked by document frequency among the relevant
// training items, ties to the smaller id.
std::vector<ConceptId> select_terminals(const TrainingSet& training, int k);

// Random tree of the grow form: a target depth d is drawn from {1..d_max},
// operators fill every level above d, terminals sit exactly at depth d.
QueryTree init_individual(std::span<const ConceptId> terminals, int d_max, Rng& rng);

// Training F-score of a query: harmonic mean of precision and recall over
// the labelled items, with 0/0 forms scored 0.
double fitness(const QueryTree& q, const TrainingSet& training, const ConceptGraph& graph,
               const SensitivityConfig& sens);

// Precomputed concept-evaluator results as per-terminal document bitsets;
// turns fitness into a handful of bitwise sweeps. Immutable once built and
// safe to share across threads.
class FitnessContext {
 public:
  FitnessContext(const TrainingSet& training, const ConceptGraph& graph,
                 const SensitivityConfig& sens, std::span<const ConceptId> terminals);

  double fitness(const QueryTree& q) const;
  std::size_t doc_count() const { return doc_count_; }

 private:
  std::vector<std::uint64_t> eval_bits(const std::vector<QueryNode>& nodes,
                                       std::size_t& pos) const;

  std::size_t doc_count_ = 0;
  std::size_t words_ = 0;
  std::uint64_t tail_mask_ = 0;
  std::size_t relevant_count_ = 0;
  std::vector<std::uint64_t> relevant_;
  std::unordered_map<ConceptId, std::vector<std::uint64_t>> delta_;
};

// Picks two contestants uniformly at random and returns the fitter one;
// exact ties fall to a coin flip.
const Individual& tournament(std::span<const Individual> pool, Rng& rng);

// Swaps the subtrees under uniformly drawn crossover points. Points are
// re-drawn up to ten times while either offspring would exceed max_depth;
// after that the parents come back unchanged.
std::pair<QueryTree, QueryTree> crossover(const QueryTree& p1, const QueryTree& p2, Rng& rng,
                                          int max_depth);

// With probability mutation_prob, independently rewrites each node (at
// per_node_mutation_rate) into a random primitive of the same arity; the
// tree shape never changes.
QueryTree mutate(const QueryTree& q, std::span<const ConceptId> terminals, const GpConfig& cfg,
                 Rng& rng);

// Best fitness per island after one generation's replacement.
struct GenerationTrace {
  int generation = 0;
  std::vector<double> best_fitness;
};

struct EvolveOptions {
  int threads = 0;  // 0 means all hardware threads
  std::function<void(const GenerationTrace&)> on_generation;
};

// The island-model loop: M subpopulations evolve for G generations with
// tournament selection, occasional cross-island parent choice, subtree
// crossover, point mutation and elitist replacement. The best member of
// each island becomes one voting query of the returned rule. Fixed seed
// gives a byte-identical rule regardless of thread count.
WikiEsRule evolve(const TrainingSet& training, const ConceptGraph& graph, const GpConfig& cfg,
                  const SensitivityConfig& sens, const EvolveOptions& opts = {});

struct ThresholdGrid {
  std::vector<double> c1 = {0.90, 0.95, 0.99};
  std::vector<double> c2 = {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
};

// Grid-searches the sensitivity pair by mean training F of the
// single-concept queries over the terminal set; ties go to the strictest
// (largest) thresholds.
SensitivityConfig calibrate_thresholds(const TrainingSet& training, const ConceptGraph& graph,
                                       const ThresholdGrid& grid = {}, int terminal_cap = 15);

}  // namespace wikies
