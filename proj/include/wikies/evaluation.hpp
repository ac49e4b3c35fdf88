#pragma once

#include <string>
#include <vector>

#include "wikies/concept_graph.hpp"
#include "wikies/gp_engine.hpp"
#include "wikies/query_model.hpp"

namespace wikies {

// Classification quality over a labelled corpus. Reports produced by
// score() always satisfy: metrics are recomputable from the counts;
// macro_average() instead carries mean metrics over summed counts.
struct MetricsReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double accuracy = 0.0;

  static MetricsReport from_counts(std::size_t tp, std::size_t fp, std::size_t tn,
                                   std::size_t fn);
};

// Classifies every document and derives the four metrics; 0/0 forms score
// 0 as in the fitness function.
MetricsReport score(const WikiEsRule& rule, const TrainingSet& corpus, const ConceptGraph& graph);

struct NamedReport {
  std::string name;
  MetricsReport report;
};

struct ComparisonCell {
  double percent = 0.0;
  bool defined = false;
};

// cells[row][col] = 100 * (F_col - F_row) / F_row; rows with F = 0 leave
// their cells undefined.
struct ComparisonMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<ComparisonCell>> cells;
};

ComparisonMatrix compare(const std::vector<NamedReport>& reports);

// Mean of per-topic metrics (macro average); counts are summed for
// reference.
MetricsReport macro_average(const std::vector<MetricsReport>& reports);

std::string format_report(const MetricsReport& report);
std::string format_matrix(const ComparisonMatrix& matrix);

// Tab-separated per-topic metric lines for external plotting.
std::string format_topic_table(const std::vector<NamedReport>& topics);
// Tab-separated per-topic F-scores of two runs plus the relative
// difference in percent (blank when undefined).
std::string format_topic_differences(const std::vector<NamedReport>& a,
                                     const std::vector<NamedReport>& b);

}  // namespace wikies
