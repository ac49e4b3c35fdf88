// Acceptance harness: one self-contained check per shipped guarantee,
// each printing a single PASS/FAIL line. Exit status is the number of
// failed checks. Every expected value here is recomputed independently
// (truth tables, counting, enumeration); nothing is read back from the
// library under test.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "support.hpp"
#include "wikies/concept_graph.hpp"
#include "wikies/corpus.hpp"
#include "wikies/digest.hpp"
#include "wikies/evaluation.hpp"
#include "wikies/gp_engine.hpp"
#include "wikies/pipeline.hpp"
#include "wikies/query_model.hpp"
#include "wikies/rng.hpp"

using namespace wikies;
using testutil::make_entry;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Failure(msg);
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------
// 1. Relatedness properties: the hand-computed fixture value, then
// symmetry, range, self=1 and disjoint=0 on randomized small graphs.

void check_relatedness() {
  auto start = std::chrono::steady_clock::now();

  auto fixture = testutil::fixture_graph();
  require(std::abs(fixture.link_rel(1, 2) - 2.0 / 3.0) <= 1e-9,
          "fixture pair (1,2) is not 2/3");

  Rng rng(101);
  for (int iter = 0; iter < 10000; ++iter) {
    auto n = static_cast<ConceptId>(4 + rng.below(5));
    std::vector<ConceptEntry> entries;
    for (ConceptId id = 1; id <= n; ++id) {
      std::vector<ConceptId> inlinks;
      if (id == 1) inlinks = {2};
      else if (id == 2) inlinks = {3};
      else {
        for (ConceptId src = 1; src <= n; ++src)
          if (rng.unit() < 0.4) inlinks.push_back(src);
        if (inlinks.empty()) inlinks.push_back(static_cast<ConceptId>(1 + rng.below(n)));
      }
      entries.push_back(make_entry(id, "c" + std::to_string(id), false, inlinks));
    }
    auto graph = ConceptGraph::from_entries(entries);
    for (ConceptId a = 1; a <= n; ++a) {
      require(graph.link_rel(a, a) == 1.0, "self relatedness is not 1");
      for (ConceptId b = 1; b <= n; ++b) {
        double r = graph.link_rel(a, b);
        require(r >= 0.0 && r <= 1.0, "relatedness out of [0,1]");
        require(r == graph.link_rel(b, a), "relatedness is not symmetric");
      }
    }
    require(graph.link_rel(1, 2) == 0.0, "disjoint inlink sets do not score 0");
  }

  require(elapsed(start) < 5.0, "relatedness checks exceeded 5 seconds");
}

// ---------------------------------------------------------------------
// 2. Query evaluation matches an independent recursive truth-table
// evaluator on every assignment of up to 5 variables.

template <std::size_t N>
bool oracle_eval(const std::vector<QueryNode>& nodes, std::size_t& pos,
                 const std::array<bool, N>& truth) {
  const QueryNode& node = nodes[pos++];
  switch (node.kind) {
    case NodeKind::kTerminal: return truth[static_cast<std::size_t>(node.terminal)];
    case NodeKind::kNot: return !oracle_eval(nodes, pos, truth);
    case NodeKind::kAnd: {
      bool a = oracle_eval(nodes, pos, truth);
      bool b = oracle_eval(nodes, pos, truth);
      return a && b;
    }
    case NodeKind::kOr: {
      bool a = oracle_eval(nodes, pos, truth);
      bool b = oracle_eval(nodes, pos, truth);
      return a || b;
    }
  }
  throw Failure("oracle hit an unknown node kind");
}

void grow_random(std::vector<QueryNode>& out, int leaves, ConceptId max_terminal, Rng& rng) {
  if (rng.unit() < 0.2) {
    out.push_back({NodeKind::kNot, 0});
    grow_random(out, leaves, max_terminal, rng);
    return;
  }
  if (leaves == 1) {
    out.push_back({NodeKind::kTerminal, static_cast<ConceptId>(1 + rng.below(
                                            static_cast<std::uint64_t>(max_terminal)))});
    return;
  }
  out.push_back({rng.unit() < 0.5 ? NodeKind::kAnd : NodeKind::kOr, 0});
  int left = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(leaves - 1)));
  grow_random(out, left, max_terminal, rng);
  grow_random(out, leaves - left, max_terminal, rng);
}

void check_boolean_oracle() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(202);
  for (int iter = 0; iter < 1000; ++iter) {
    std::vector<QueryNode> nodes;
    grow_random(nodes, 1 + static_cast<int>(rng.below(5)), 5, rng);
    auto tree = QueryTree::from_nodes(nodes);

    for (unsigned mask = 0; mask < 32; ++mask) {
      std::array<bool, 6> truth{};
      for (int v = 1; v <= 5; ++v) truth[static_cast<std::size_t>(v)] = (mask >> (v - 1)) & 1;

      std::size_t pos = 0;
      bool expected = oracle_eval(nodes, pos, truth);
      require(pos == nodes.size(), "oracle did not consume the whole tree");
      bool got = tree.evaluate(
          [&truth](ConceptId id) { return truth[static_cast<std::size_t>(id)]; });
      require(got == expected, "query evaluation disagrees with the truth table");
    }
  }
  require(elapsed(start) < 10.0, "boolean oracle checks exceeded 10 seconds");
}

// ---------------------------------------------------------------------
// 3. Fitness equals a direct count-based precision/recall/F computation
// on random query/corpus pairs, both through the plain evaluator and the
// bitset context.

void check_fitness_oracle() {
  std::vector<ConceptEntry> entries;
  std::vector<ConceptId> terminals;
  for (ConceptId id = 1; id <= 10; ++id) {
    entries.push_back(make_entry(id, "topic" + std::to_string(id), false, {}));
    terminals.push_back(id);
  }
  auto graph = ConceptGraph::from_entries(entries);
  SensitivityConfig sens;

  Rng rng(303);
  for (int iter = 0; iter < 1000; ++iter) {
    TrainingSet set;
    std::vector<std::array<bool, 11>> membership;
    for (int d = 0; d < 20; ++d) {
      std::array<bool, 11> has{};
      std::vector<ConceptId> general;
      for (ConceptId id = 1; id <= 10; ++id) {
        if (rng.unit() < 0.3) {
          has[static_cast<std::size_t>(id)] = true;
          general.push_back(id);
        }
      }
      TrainingItem item;
      item.profile = DocumentProfile::make("d" + std::to_string(d), {}, general);
      item.relevance = d == 0 ? 1 : (rng.unit() < 0.5 ? 1 : 0);
      set.items.push_back(std::move(item));
      membership.push_back(has);
    }

    std::vector<QueryNode> nodes;
    grow_random(nodes, 1 + static_cast<int>(rng.below(6)), 10, rng);
    auto tree = QueryTree::from_nodes(nodes);

    long tp = 0, fp = 0, fn = 0;
    for (std::size_t d = 0; d < set.items.size(); ++d) {
      std::size_t pos = 0;
      bool match = oracle_eval(nodes, pos, membership[d]);
      bool relevant = set.items[d].relevance == 1;
      if (match && relevant) ++tp;
      else if (match) ++fp;
      else if (relevant) ++fn;
    }
    long retrieved = tp + fp;
    long relevant = tp + fn;
    double precision = retrieved == 0 ? 0.0 : static_cast<double>(tp) / retrieved;
    double recall = relevant == 0 ? 0.0 : static_cast<double>(tp) / relevant;
    double expected =
        precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);

    double plain = fitness(tree, set, graph, sens);
    require(std::abs(plain - expected) <= 1e-12, "fitness disagrees with the counting oracle");

    FitnessContext ctx(set, graph, sens, terminals);
    require(std::abs(ctx.fitness(tree) - expected) <= 1e-12,
            "bitset fitness disagrees with the counting oracle");
  }
}

// ---------------------------------------------------------------------
// 4. The GP recovers a planted query: high training F and held-out F on
// most seeds, each seed within its time box.

void check_planted_recovery() {
  auto fx = testutil::planted_fixture(200, 2026);
  auto graph = ConceptGraph::from_entries(fx.entries);
  std::vector<CorpusRecord> train_recs(fx.records.begin(), fx.records.begin() + 150);
  std::vector<CorpusRecord> held_recs(fx.records.begin() + 150, fx.records.end());
  TrainingSet train_set = labeled_set(train_recs, wiki_profiles(train_recs, graph));
  TrainingSet held_set = labeled_set(held_recs, wiki_profiles(held_recs, graph));

  GpConfig cfg;
  cfg.generations = 100;
  cfg.subpopulations = 5;
  cfg.subpopulation_size = 50;
  SensitivityConfig sens;

  int good = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    cfg.seed = seed;
    auto start = std::chrono::steady_clock::now();
    WikiEsRule rule = evolve(train_set, graph, cfg, sens);
    require(elapsed(start) < 120.0, "a training run exceeded 2 minutes");

    double train_f = score(rule, train_set, graph).f_score;
    double held_f = score(rule, held_set, graph).f_score;
    if (train_f >= 0.95 && held_f >= 0.90) ++good;
  }
  require(good >= 8, "planted query recovered in only " + std::to_string(good) +
                         " of 10 seeds");
}

// ---------------------------------------------------------------------
// 5. Brute force bound: enumerate every tree of depth <= 2 over 4
// terminals, take the best achievable fitness, and demand the evolved
// best lands within 5 percent of it (and never above it).

std::vector<QueryTree> enumerate_trees(int depth, const std::vector<ConceptId>& terms) {
  std::vector<QueryTree> out;
  for (ConceptId t : terms) out.push_back(QueryTree::terminal(t));
  if (depth == 0) return out;
  auto sub = enumerate_trees(depth - 1, terms);
  for (const auto& child : sub) out.push_back(QueryTree::negate(child));
  for (const auto& left : sub)
    for (const auto& right : sub) {
      out.push_back(QueryTree::combine(NodeKind::kAnd, left, right));
      out.push_back(QueryTree::combine(NodeKind::kOr, left, right));
    }
  return out;
}

TrainingSet noisy_conjunction_corpus() {
  TrainingSet set;
  for (unsigned mask = 0; mask < 16; ++mask) {
    std::vector<ConceptId> general;
    for (int v = 1; v <= 4; ++v)
      if ((mask >> (v - 1)) & 1) general.push_back(v);
    bool label = (((mask >> 0) & 1) && ((mask >> 1) & 1)) || ((mask >> 2) & 1);
    if (mask == 1 || mask == 6 || mask == 11) label = !label;  // planted label noise
    TrainingItem item;
    item.profile = DocumentProfile::make("m" + std::to_string(mask), {}, general);
    item.relevance = label ? 1 : 0;
    set.items.push_back(std::move(item));
  }
  return set;
}

void check_brute_force_bound() {
  std::vector<ConceptEntry> entries;
  std::vector<ConceptId> terms = {1, 2, 3, 4};
  for (ConceptId id : terms)
    entries.push_back(make_entry(id, "topic" + std::to_string(id), false, {}));
  auto graph = ConceptGraph::from_entries(entries);
  SensitivityConfig sens;
  TrainingSet set = noisy_conjunction_corpus();

  auto all = enumerate_trees(2, terms);
  require(all.size() == 3244, "depth-2 enumeration size is off");
  FitnessContext ctx(set, graph, sens, terms);
  double optimum = 0.0;
  for (const auto& tree : all) optimum = std::max(optimum, ctx.fitness(tree));
  require(optimum > 0.0, "enumerated optimum is degenerate");

  GpConfig cfg;
  cfg.generations = 30;
  cfg.subpopulations = 3;
  cfg.subpopulation_size = 30;
  cfg.initial_depth = 2;
  cfg.max_crossover_depth = 2;
  cfg.terminal_cap = 4;

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    cfg.seed = seed;
    WikiEsRule rule = evolve(set, graph, cfg, sens);
    double best = 0.0;
    for (const auto& q : rule.queries)
      best = std::max(best, fitness(q.tree, set, graph, sens));
    require(best <= optimum + 1e-12, "evolved fitness exceeds the enumerated optimum");
    require(best >= 0.95 * optimum - 1e-12,
            "seed " + std::to_string(seed) + " reached only " + std::to_string(best) +
                " of optimum " + std::to_string(optimum));
  }
}

// ---------------------------------------------------------------------
// 6. Substituted-concept generalization: held-out relevant docs carry
// only close neighbours of the training concepts. The wiki matcher keeps
// its recall, the token baseline loses most of it, and precision stays
// comparable.

struct SubstituteFixture {
  std::vector<ConceptEntry> entries;
  std::vector<CorpusRecord> train;
  std::vector<CorpusRecord> held;
};

SubstituteFixture substitute_fixture() {
  SubstituteFixture fx;
  auto range = [](ConceptId lo, ConceptId hi) {
    std::vector<ConceptId> out;
    for (ConceptId id = lo; id <= hi; ++id) out.push_back(id);
    return out;
  };
  fx.entries.push_back(make_entry(1, "mortgage", false, range(8, 15)));
  auto b1 = range(8, 14);
  b1.push_back(16);
  fx.entries.push_back(make_entry(2, "mortgage loan", false, b1));
  fx.entries.push_back(make_entry(3, "espionage", false, range(17, 24)));
  auto b2 = range(17, 23);
  b2.push_back(25);
  fx.entries.push_back(make_entry(4, "counterintelligence", false, b2));
  fx.entries.push_back(make_entry(5, "lawsuit", false, range(26, 33)));
  auto b3 = range(26, 32);
  b3.push_back(34);
  fx.entries.push_back(make_entry(6, "litigation", false, b3));
  for (ConceptId id = 7; id <= 40; ++id)
    fx.entries.push_back(make_entry(id, "filler" + std::to_string(id), false, {}));

  auto doc = [](std::string id, std::vector<ConceptId> concepts, int rel) {
    CorpusRecord rec;
    rec.doc_id = std::move(id);
    rec.concepts = std::move(concepts);
    rec.relevance = rel;
    return rec;
  };
  int t = 0;
  for (ConceptId anchor : {1, 3, 5})
    for (int j = 0; j < 6; ++j) {
      ConceptId filler = static_cast<ConceptId>(8 + 6 * ((anchor - 1) / 2) + j);
      fx.train.push_back(doc("t" + std::to_string(t++), {anchor, filler}, 1));
    }
  for (int k = 0; k < 20; ++k) {
    auto f = static_cast<ConceptId>(26 + (2 * k) % 15);
    auto g = static_cast<ConceptId>(26 + (2 * k + 1) % 15);
    fx.train.push_back(doc("t" + std::to_string(t++), {f, g}, 0));
  }

  int h = 0;
  for (int i = 0; i < 10; ++i)
    fx.held.push_back(
        doc("h" + std::to_string(h++), {2, static_cast<ConceptId>(26 + i % 15)}, 1));
  for (int i = 0; i < 5; ++i)
    fx.held.push_back(
        doc("h" + std::to_string(h++), {4, static_cast<ConceptId>(26 + (10 + i) % 15)}, 1));
  for (int i = 0; i < 5; ++i)
    fx.held.push_back(
        doc("h" + std::to_string(h++), {6, static_cast<ConceptId>(26 + i % 15)}, 1));
  for (int i = 0; i < 20; ++i) {
    auto f = static_cast<ConceptId>(26 + (2 * i) % 15);
    auto g = static_cast<ConceptId>(26 + (2 * i + 1) % 15);
    fx.held.push_back(doc("h" + std::to_string(h++), {f, g}, 0));
  }
  return fx;
}

void check_substitute_recall() {
  auto fx = substitute_fixture();
  auto graph = ConceptGraph::from_entries(fx.entries);

  require(std::abs(graph.link_rel(1, 2) - 0.9170322809019885) <= 1e-12,
          "substitute pair relatedness moved");
  require(graph.link_rel(1, 2) >= 0.7, "substitute pairs are not close enough");
  require(graph.link_rel(3, 4) == graph.link_rel(1, 2), "pair construction is not uniform");
  require(graph.link_rel(1, 4) == 0.0, "cross-pair relatedness should be 0");

  TrainingSet held_set = labeled_set(fx.held, wiki_profiles(fx.held, graph));

  GpConfig cfg;
  cfg.generations = 60;
  cfg.subpopulations = 5;
  cfg.subpopulation_size = 40;

  SensitivityConfig wiki_sens;
  SensitivityConfig token_sens;
  token_sens.matcher = Matcher::kExactToken;

  int good = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    cfg.seed = seed;
    auto wiki = train_rule(fx.train, graph, cfg, wiki_sens);
    auto token = train_rule(fx.train, graph, cfg, token_sens);

    MetricsReport wiki_held = score(wiki.rule, held_set, graph);
    MetricsReport token_held = ActiveRule(token.rule, graph).score_records(fx.held);

    bool recall_gap = wiki_held.recall - token_held.recall >= 0.20;
    bool precision_close = std::abs(wiki_held.precision - token_held.precision) <= 0.15;
    if (recall_gap && precision_close) ++good;
  }
  require(good >= 8, "recall advantage held in only " + std::to_string(good) +
                         " of 10 seeds");
}

// ---------------------------------------------------------------------
// 7. Elitism: each island's best fitness never decreases over the
// logged generations.

void check_elitism_monotone() {
  auto fx = testutil::planted_fixture(120, 77);
  auto graph = ConceptGraph::from_entries(fx.entries);
  TrainingSet set = labeled_set(fx.records, wiki_profiles(fx.records, graph));

  GpConfig cfg;
  cfg.generations = 40;
  cfg.subpopulations = 4;
  cfg.subpopulation_size = 24;
  SensitivityConfig sens;

  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    cfg.seed = seed;
    std::vector<double> last;
    int traces = 0;
    EvolveOptions opts;
    opts.on_generation = [&](const GenerationTrace& trace) {
      ++traces;
      require(trace.best_fitness.size() == 4, "trace does not cover every island");
      if (!last.empty())
        for (std::size_t i = 0; i < last.size(); ++i)
          require(trace.best_fitness[i] >= last[i], "island best fitness decreased");
      last = trace.best_fitness;
    };
    evolve(set, graph, cfg, sens, opts);
    require(traces == cfg.generations + 1, "expected one trace per generation");
  }
}

// ---------------------------------------------------------------------
// 8. Fixed-seed training is byte-identical across runs and thread
// counts, exercised through the command line like a user would.

void check_thread_determinism() {
  testutil::TempDir dir;
  auto fx = testutil::planted_fixture(60, 9);
  auto graph = dir.file("graph.jsonl", testutil::entries_jsonl(fx.entries));
  auto corpus = dir.file("corpus.jsonl", testutil::records_jsonl(fx.records));
  auto config = dir.file(
      "config.json",
      "{\"generations\": 20, \"subpopulations\": 3, \"subpopulation_size\": 20}\n");

  std::vector<std::string> digests;
  for (const char* threads : {"1", "4", "4"}) {
    auto out = dir.path() + "/rule-" + threads + "-" + std::to_string(digests.size()) + ".json";
    auto res = testutil::run_cli({"train", "--graph", graph, "--corpus", corpus, "--config",
                                  config, "--seed", "42", "--threads", threads, "--out", out},
                                 dir);
    require(res.status == 0, "training run failed: " + res.err);
    digests.push_back(sha256_file(out));
  }
  require(digests[0] == digests[1] && digests[1] == digests[2],
          "rule files differ across runs or thread counts");
}

// ---------------------------------------------------------------------
// 9. Comparison arithmetic reproduces the expected relative improvement
// from two fixed F-scores.

void check_comparison_arithmetic() {
  NamedReport a{"a", MetricsReport::from_counts(2109, 2891, 2109, 2891)};
  NamedReport b{"b", MetricsReport::from_counts(1298, 3702, 1298, 3702)};
  require(a.report.f_score == 0.4218, "first synthetic F-score is off");
  require(b.report.f_score == 0.2596, "second synthetic F-score is off");

  ComparisonMatrix m = compare({a, b});
  const ComparisonCell& cell = m.cells[1][0];
  require(cell.defined, "improvement cell should be defined");
  require(std::abs(cell.percent - 62.48) <= 0.01,
          "relative improvement is " + std::to_string(cell.percent));
}

struct Criterion {
  const char* name;
  void (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"link relatedness properties", check_relatedness},
      {"boolean evaluator equivalence", check_boolean_oracle},
      {"fitness oracle agreement", check_fitness_oracle},
      {"planted query recovery", check_planted_recovery},
      {"brute force optimality bound", check_brute_force_bound},
      {"substituted concept recall advantage", check_substitute_recall},
      {"island elitism monotonicity", check_elitism_monotone},
      {"thread count determinism", check_thread_determinism},
      {"comparison matrix arithmetic", check_comparison_arithmetic},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run();
      std::printf("PASS  %d/9  %-40s (%.1fs)\n", index, c.name, elapsed(start));
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL  %d/9  %-40s %s\n", index, c.name, e.what());
    }
    std::fflush(stdout);
  }
  if (failures == 0) std::printf("all 9 criteria passed\n");
  else std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
