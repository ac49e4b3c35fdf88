#include "wikies/gp_engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cassert>
#include <map>
#include <mutex>
#include <thread>

#include "wikies/error.hpp"

namespace wikies {
namespace {

double f_from_counts(std::size_t tp, std::size_t retrieved, std::size_t relevant) {
  if (retrieved == 0 || relevant == 0) return 0.0;
  double precision = static_cast<double>(tp) / static_cast<double>(retrieved);
  double recall = static_cast<double>(tp) / static_cast<double>(relevant);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

void grow(std::vector<QueryNode>& out, int remaining, std::span<const ConceptId> terminals,
          Rng& rng) {
  if (remaining == 0) {
    out.push_back({NodeKind::kTerminal, terminals[rng.index(terminals.size())]});
    return;
  }
  static constexpr NodeKind kOps[] = {NodeKind::kAnd, NodeKind::kOr, NodeKind::kNot};
  NodeKind kind = kOps[rng.below(3)];
  out.push_back({kind, 0});
  for (int i = 0; i < arity(kind); ++i) grow(out, remaining - 1, terminals, rng);
}

// Runs f(0..count-1), spreading islands over at most `threads` workers.
template <typename F>
void for_each_island(int count, int threads, F&& f) {
  int workers = threads <= 0 ? static_cast<int>(std::thread::hardware_concurrency()) : threads;
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

void GpConfig::check() const {
  if (generations < 1) throw Error("generations must be positive");
  if (subpopulations < 1) throw Error("subpopulations must be positive");
  if (subpopulation_size < 2 || subpopulation_size % 2 != 0)
    throw Error("subpopulation size must be even and at least 2");
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0))
    throw Error("crossover probability must lie in [0, 1]");
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0))
    throw Error("mutation probability must lie in [0, 1]");
  if (!(per_node_mutation_rate >= 0.0 && per_node_mutation_rate <= 1.0))
    throw Error("per-node mutation rate must lie in [0, 1]");
  if (initial_depth < 1) throw Error("initial depth must be positive");
  if (max_crossover_depth < initial_depth)
    throw Error("max crossover depth must be at least the initial depth");
  if (terminal_cap < 1) throw Error("terminal cap must be positive");
}

std::size_t TrainingSet::relevant_count() const {
  std::size_t n = 0;
  for (const TrainingItem& item : items) n += item.relevance != 0;
  return n;
}

void TrainingSet::check() const {
  for (const TrainingItem& item : items)
    if (item.relevance != 0 && item.relevance != 1)
      throw Error("relevance labels must be 0 or 1");
  std::size_t rel = relevant_count();
  if (items.empty() || rel == 0 || rel == items.size())
    throw Error("degenerate training set: need at least one relevant and one irrelevant document");
}

bool fitter(const Individual& a, const Individual& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  return a.tree.node_count() < b.tree.node_count();
}

std::vector<ConceptId> select_terminals(const TrainingSet& training, int k) {
  if (k < 1) throw Error("terminal cap must be positive");
  std::map<ConceptId, std::size_t> freq;
  for (const TrainingItem& item : training.items) {
    if (item.relevance == 0) continue;
    for (ConceptId id : item.profile.all_concepts()) ++freq[id];
  }
  if (freq.empty()) throw Error("no candidate terminals");

  std::vector<std::pair<ConceptId, std::size_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<ConceptId> out;
  out.reserve(std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(k)));
  for (const auto& [id, n] : ranked) {
    if (out.size() == static_cast<std::size_t>(k)) break;
    out.push_back(id);
  }
  return out;
}

QueryTree init_individual(std::span<const ConceptId> terminals, int d_max, Rng& rng) {
  if (terminals.empty()) throw Error("no candidate terminals");
  if (d_max < 1) throw Error("initial depth must be positive");
  int depth = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d_max)));
  std::vector<QueryNode> nodes;
  grow(nodes, depth, terminals, rng);
  return QueryTree::from_nodes(std::move(nodes));
}

double fitness(const QueryTree& q, const TrainingSet& training, const ConceptGraph& graph,
               const SensitivityConfig& sens) {
  std::size_t tp = 0;
  std::size_t retrieved = 0;
  std::size_t relevant = 0;
  for (const TrainingItem& item : training.items) {
    bool hit = eval_query(graph, q, item.profile, sens);
    retrieved += hit;
    relevant += item.relevance != 0;
    tp += hit && item.relevance != 0;
  }
  return f_from_counts(tp, retrieved, relevant);
}

FitnessContext::FitnessContext(const TrainingSet& training, const ConceptGraph& graph,
                               const SensitivityConfig& sens,
                               std::span<const ConceptId> terminals) {
  doc_count_ = training.items.size();
  words_ = (doc_count_ + 63) / 64;
  std::size_t tail = doc_count_ % 64;
  tail_mask_ = tail == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << tail) - 1;

  relevant_.assign(words_, 0);
  for (std::size_t d = 0; d < doc_count_; ++d) {
    if (training.items[d].relevance != 0) {
      relevant_[d / 64] |= std::uint64_t{1} << (d % 64);
      ++relevant_count_;
    }
  }
  for (ConceptId t : terminals) {
    std::vector<std::uint64_t> bits(words_, 0);
    for (std::size_t d = 0; d < doc_count_; ++d) {
      if (eval_concept(graph, t, training.items[d].profile, sens))
        bits[d / 64] |= std::uint64_t{1} << (d % 64);
    }
    delta_.emplace(t, std::move(bits));
  }
}

std::vector<std::uint64_t> FitnessContext::eval_bits(const std::vector<QueryNode>& nodes,
                                                     std::size_t& pos) const {
  const QueryNode& node = nodes[pos++];
  switch (node.kind) {
    case NodeKind::kTerminal: {
      auto it = delta_.find(node.terminal);
      if (it == delta_.end())
        throw Error("query uses concept " + std::to_string(node.terminal) +
                    " outside the terminal set");
      return it->second;
    }
    case NodeKind::kNot: {
      std::vector<std::uint64_t> bits = eval_bits(nodes, pos);
      for (auto& w : bits) w = ~w;
      if (!bits.empty()) bits.back() &= tail_mask_;
      return bits;
    }
    case NodeKind::kAnd:
    case NodeKind::kOr: {
      std::vector<std::uint64_t> left = eval_bits(nodes, pos);
      std::vector<std::uint64_t> right = eval_bits(nodes, pos);
      if (node.kind == NodeKind::kAnd)
        for (std::size_t i = 0; i < left.size(); ++i) left[i] &= right[i];
      else
        for (std::size_t i = 0; i < left.size(); ++i) left[i] |= right[i];
      return left;
    }
  }
  throw Error("corrupt query tree");
}

double FitnessContext::fitness(const QueryTree& q) const {
  if (q.empty()) throw Error("query tree is empty");
  std::size_t pos = 0;
  std::vector<std::uint64_t> bits = eval_bits(q.nodes(), pos);
  std::size_t retrieved = 0;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < words_; ++i) {
    retrieved += static_cast<std::size_t>(std::popcount(bits[i]));
    tp += static_cast<std::size_t>(std::popcount(bits[i] & relevant_[i]));
  }
  return f_from_counts(tp, retrieved, relevant_count_);
}

const Individual& tournament(std::span<const Individual> pool, Rng& rng) {
  if (pool.empty()) throw Error("tournament pool is empty");
  const Individual& a = pool[rng.index(pool.size())];
  const Individual& b = pool[rng.index(pool.size())];
  if (fitter(a, b)) return a;
  if (fitter(b, a)) return b;
  return rng.coin() ? a : b;
}

std::pair<QueryTree, QueryTree> crossover(const QueryTree& p1, const QueryTree& p2, Rng& rng,
                                          int max_depth) {
  for (int attempt = 0; attempt < 10; ++attempt) {
    std::size_t pos1 = rng.index(p1.node_count());
    std::size_t pos2 = rng.index(p2.node_count());
    auto [c1, c2] = QueryTree::swap_subtrees(p1, pos1, p2, pos2);
    if (c1.depth() <= max_depth && c2.depth() <= max_depth)
      return {std::move(c1), std::move(c2)};
  }
  return {p1, p2};
}

QueryTree mutate(const QueryTree& q, std::span<const ConceptId> terminals, const GpConfig& cfg,
                 Rng& rng) {
  if (terminals.empty()) throw Error("no candidate terminals");
  if (rng.unit() >= cfg.mutation_prob) return q;
  QueryTree out = q;
  for (std::size_t pos = 0; pos < out.node_count(); ++pos) {
    if (rng.unit() >= cfg.per_node_mutation_rate) continue;
    switch (arity(out.nodes()[pos].kind)) {
      case 0:
        out.replace_primitive(pos, NodeKind::kTerminal, terminals[rng.index(terminals.size())]);
        break;
      case 1:
        break;  // NOT is the only unary primitive, so replacement keeps it
      case 2:
        out.replace_primitive(pos, rng.coin() ? NodeKind::kAnd : NodeKind::kOr, 0);
        break;
    }
  }
  return out;
}

namespace {

std::vector<Individual> step_island(int island, const std::vector<std::vector<Individual>>& prev,
                                    Rng& rng, const GpConfig& cfg,
                                    std::span<const ConceptId> terminals,
                                    const FitnessContext& ctx) {
  const std::vector<Individual>& own = prev[static_cast<std::size_t>(island)];
  int m = cfg.subpopulations;

  std::vector<Individual> offspring;
  offspring.reserve(own.size());
  while (offspring.size() < own.size()) {
    const Individual& parent1 = tournament(own, rng);

    std::span<const Individual> pool = own;
    if (m > 1 && rng.unit() < 1.0 / static_cast<double>(m)) {
      std::size_t other = rng.below(static_cast<std::uint64_t>(m - 1));
      if (other >= static_cast<std::size_t>(island)) ++other;
      pool = prev[other];
    }
    const Individual& parent2 = tournament(pool, rng);

    QueryTree child1 = parent1.tree;
    QueryTree child2 = parent2.tree;
    if (rng.unit() < cfg.crossover_prob)
      std::tie(child1, child2) = crossover(parent1.tree, parent2.tree, rng,
                                           cfg.max_crossover_depth);
    child1 = mutate(child1, terminals, cfg, rng);
    child2 = mutate(child2, terminals, cfg, rng);
    double f1 = ctx.fitness(child1);
    double f2 = ctx.fitness(child2);
    offspring.push_back({std::move(child1), f1});
    offspring.push_back({std::move(child2), f2});
  }

  std::vector<Individual> merged;
  merged.reserve(own.size() + offspring.size());
  merged.insert(merged.end(), own.begin(), own.end());
  merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                std::make_move_iterator(offspring.end()));
  std::stable_sort(merged.begin(), merged.end(), fitter);
  merged.resize(own.size());
  assert(!merged.empty() && !own.empty() && merged.front().fitness >= own.front().fitness);
  return merged;
}

}  // namespace

WikiEsRule evolve(const TrainingSet& training, const ConceptGraph& graph, const GpConfig& cfg,
                  const SensitivityConfig& sens, const EvolveOptions& opts) {
  cfg.check();
  sens.check();
  training.check();

  std::vector<ConceptId> terminals = select_terminals(training, cfg.terminal_cap);
  FitnessContext ctx(training, graph, sens, terminals);

  int m = cfg.subpopulations;
  std::size_t n = static_cast<std::size_t>(cfg.subpopulation_size);

  std::vector<Rng> rngs;
  rngs.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) rngs.push_back(Rng::stream(cfg.seed, static_cast<std::uint64_t>(i)));

  std::vector<std::vector<Individual>> pops(static_cast<std::size_t>(m));
  for_each_island(m, opts.threads, [&](int i) {
    auto& pop = pops[static_cast<std::size_t>(i)];
    pop.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      QueryTree tree = init_individual(terminals, cfg.initial_depth, rngs[static_cast<std::size_t>(i)]);
      double f = ctx.fitness(tree);
      pop.push_back({std::move(tree), f});
    }
    std::stable_sort(pop.begin(), pop.end(), fitter);
  });

  auto emit_trace = [&](int generation) {
    if (!opts.on_generation) return;
    GenerationTrace trace;
    trace.generation = generation;
    trace.best_fitness.reserve(pops.size());
    for (const auto& pop : pops) trace.best_fitness.push_back(pop.front().fitness);
    opts.on_generation(trace);
  };
  emit_trace(0);

  for (int gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<std::vector<Individual>> next(static_cast<std::size_t>(m));
    for_each_island(m, opts.threads, [&](int i) {
      next[static_cast<std::size_t>(i)] =
          step_island(i, pops, rngs[static_cast<std::size_t>(i)], cfg, terminals, ctx);
    });
    pops = std::move(next);
    emit_trace(gen);
  }

  WikiEsRule rule;
  rule.sensitivity = sens;
  rule.terminal_set = terminals;
  rule.queries.reserve(pops.size());
  for (const auto& pop : pops) rule.queries.push_back({pop.front().tree, pop.front().fitness});
  return rule;
}

SensitivityConfig calibrate_thresholds(const TrainingSet& training, const ConceptGraph& graph,
                                       const ThresholdGrid& grid, int terminal_cap) {
  training.check();
  if (grid.c1.empty() || grid.c2.empty()) throw Error("threshold grid is empty");
  std::vector<ConceptId> terminals = select_terminals(training, terminal_cap);

  // d_rel and membership do not depend on the thresholds, so they are
  // computed once per (terminal, document) pair.
  struct Probe {
    bool member = false;
    double d_rel = 0.0;
  };
  std::size_t docs = training.items.size();
  std::vector<std::vector<Probe>> probes(terminals.size(), std::vector<Probe>(docs));
  std::vector<bool> entity(terminals.size());
  for (std::size_t t = 0; t < terminals.size(); ++t) {
    entity[t] = graph.is_named_entity(terminals[t]);
    for (std::size_t d = 0; d < docs; ++d) {
      const DocumentProfile& p = training.items[d].profile;
      probes[t][d].member = p.contains(terminals[t]);
      if (!probes[t][d].member) probes[t][d].d_rel = graph.d_rel(terminals[t], p);
    }
  }
  std::size_t relevant = training.relevant_count();

  double best_score = -1.0;
  double best_c1 = 0.0;
  double best_c2 = 0.0;
  for (double c1 : grid.c1) {
    for (double c2 : grid.c2) {
      double sum = 0.0;
      for (std::size_t t = 0; t < terminals.size(); ++t) {
        std::size_t tp = 0;
        std::size_t retrieved = 0;
        double threshold = entity[t] ? c1 : c2;
        for (std::size_t d = 0; d < docs; ++d) {
          bool hit = probes[t][d].member || probes[t][d].d_rel > threshold;
          retrieved += hit;
          tp += hit && training.items[d].relevance != 0;
        }
        sum += f_from_counts(tp, retrieved, relevant);
      }
      double score = sum / static_cast<double>(terminals.size());
      bool better = score > best_score ||
                    (score == best_score &&
                     (c1 > best_c1 || (c1 == best_c1 && c2 > best_c2)));
      if (better) {
        best_score = score;
        best_c1 = c1;
        best_c2 = c2;
      }
    }
  }

  SensitivityConfig out;
  out.c1 = best_c1;
  out.c2 = best_c2;
  out.matcher = Matcher::kWikiRelatedness;
  out.check();
  return out;
}

}  // namespace wikies
