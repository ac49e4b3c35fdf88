#include "wikies/evaluation.hpp"

#include <algorithm>
#include <cstdio>

#include "wikies/error.hpp"

namespace wikies {
namespace {

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

MetricsReport MetricsReport::from_counts(std::size_t tp, std::size_t fp, std::size_t tn,
                                         std::size_t fn) {
  MetricsReport r;
  r.tp = tp;
  r.fp = fp;
  r.tn = tn;
  r.fn = fn;
  std::size_t retrieved = tp + fp;
  std::size_t relevant = tp + fn;
  std::size_t total = tp + fp + tn + fn;
  r.precision = retrieved == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(retrieved);
  r.recall = relevant == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(relevant);
  r.f_score = r.precision + r.recall == 0.0
                  ? 0.0
                  : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  r.accuracy = total == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total);
  return r;
}

MetricsReport score(const WikiEsRule& rule, const TrainingSet& corpus,
                    const ConceptGraph& graph) {
  if (corpus.items.empty()) throw Error("cannot score an empty corpus");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const TrainingItem& item : corpus.items) {
    if (item.relevance != 0 && item.relevance != 1)
      throw Error("relevance labels must be 0 or 1");
    bool predicted = classify(rule, graph, item.profile);
    bool actual = item.relevance != 0;
    if (predicted && actual) ++tp;
    else if (predicted && !actual) ++fp;
    else if (!predicted && actual) ++fn;
    else ++tn;
  }
  return MetricsReport::from_counts(tp, fp, tn, fn);
}

ComparisonMatrix compare(const std::vector<NamedReport>& reports) {
  if (reports.size() < 2) throw Error("need at least 2 reports to compare");
  ComparisonMatrix m;
  for (const NamedReport& r : reports) m.names.push_back(r.name);
  m.cells.assign(reports.size(), std::vector<ComparisonCell>(reports.size()));
  for (std::size_t row = 0; row < reports.size(); ++row) {
    double base = reports[row].report.f_score;
    for (std::size_t col = 0; col < reports.size(); ++col) {
      if (base == 0.0) continue;
      m.cells[row][col].percent = 100.0 * (reports[col].report.f_score - base) / base;
      m.cells[row][col].defined = true;
    }
  }
  return m;
}

MetricsReport macro_average(const std::vector<MetricsReport>& reports) {
  if (reports.empty()) throw Error("cannot average zero reports");
  MetricsReport out;
  for (const MetricsReport& r : reports) {
    out.tp += r.tp;
    out.fp += r.fp;
    out.tn += r.tn;
    out.fn += r.fn;
    out.precision += r.precision;
    out.recall += r.recall;
    out.f_score += r.f_score;
    out.accuracy += r.accuracy;
  }
  auto n = static_cast<double>(reports.size());
  out.precision /= n;
  out.recall /= n;
  out.f_score /= n;
  out.accuracy /= n;
  return out;
}

std::string format_report(const MetricsReport& r) {
  std::string out;
  out += "f_score    " + fixed(r.f_score, 4) + "\n";
  out += "precision  " + fixed(r.precision, 4) + "\n";
  out += "recall     " + fixed(r.recall, 4) + "\n";
  out += "accuracy   " + fixed(r.accuracy, 4) + "\n";
  out += "counts     tp=" + std::to_string(r.tp) + " fp=" + std::to_string(r.fp) +
         " tn=" + std::to_string(r.tn) + " fn=" + std::to_string(r.fn) + "\n";
  return out;
}

std::string format_matrix(const ComparisonMatrix& m) {
  std::size_t width = 10;
  for (const std::string& name : m.names) width = std::max(width, name.size() + 2);

  auto pad = [&](const std::string& s) {
    std::string out = s;
    out.resize(std::max(width, out.size()), ' ');
    return out;
  };

  std::string out = pad("");
  for (const std::string& name : m.names) out += pad(name);
  out += "\n";
  for (std::size_t row = 0; row < m.names.size(); ++row) {
    out += pad(m.names[row]);
    for (std::size_t col = 0; col < m.names.size(); ++col) {
      const ComparisonCell& cell = m.cells[row][col];
      if (!cell.defined) {
        out += pad("n/a");
      } else {
        std::string s = fixed(cell.percent, 2) + "%";
        if (cell.percent > 0.0) s = "+" + s;
        out += pad(s);
      }
    }
    out += "\n";
  }
  return out;
}

std::string format_topic_table(const std::vector<NamedReport>& topics) {
  std::string out = "topic\tf_score\tprecision\trecall\taccuracy\n";
  for (const NamedReport& t : topics) {
    out += t.name + "\t" + fixed(t.report.f_score, 6) + "\t" + fixed(t.report.precision, 6) +
           "\t" + fixed(t.report.recall, 6) + "\t" + fixed(t.report.accuracy, 6) + "\n";
  }
  return out;
}

std::string format_topic_differences(const std::vector<NamedReport>& a,
                                     const std::vector<NamedReport>& b) {
  if (a.size() != b.size()) throw Error("topic lists differ in length");
  std::string out = "topic\tf_a\tf_b\trel_diff_percent\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name) throw Error("topic lists differ at '" + a[i].name + "'");
    double fa = a[i].report.f_score;
    double fb = b[i].report.f_score;
    out += a[i].name + "\t" + fixed(fa, 6) + "\t" + fixed(fb, 6) + "\t";
    out += fb == 0.0 ? "" : fixed(100.0 * (fa - fb) / fb, 2);
    out += "\n";
  }
  return out;
}

}  // namespace wikies
