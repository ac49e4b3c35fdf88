#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wikies/annotator.hpp"
#include "wikies/concept_graph.hpp"
#include "wikies/corpus.hpp"
#include "wikies/error.hpp"
#include "wikies/evaluation.hpp"
#include "wikies/gp_engine.hpp"
#include "wikies/pipeline.hpp"
#include "wikies/query_model.hpp"

namespace py = pybind11;
using namespace wikies;

namespace {

py::dict metrics_dict(const MetricsReport& r) {
  py::dict d;
  d["f_score"] = r.f_score;
  d["precision"] = r.precision;
  d["recall"] = r.recall;
  d["accuracy"] = r.accuracy;
  d["tp"] = r.tp;
  d["fp"] = r.fp;
  d["tn"] = r.tn;
  d["fn"] = r.fn;
  return d;
}

std::vector<CorpusRecord> load_labelled(const std::string& corpus_path,
                                        const std::string& qrels_path) {
  std::vector<CorpusRecord> records = load_corpus(corpus_path);
  if (!qrels_path.empty()) apply_qrels(qrels_path, records);
  return records;
}

}  // namespace

PYBIND11_MODULE(_wikies, m) {
  m.doc() = "Boolean concept-query learning over a Wikipedia-style link graph";

  py::register_exception<Error>(m, "WikiesError");

  py::class_<DocumentProfile>(m, "DocumentProfile")
      .def(py::init<>())
      .def_readwrite("doc_id", &DocumentProfile::doc_id)
      .def_readwrite("named_entities", &DocumentProfile::named_entities)
      .def_readwrite("general_concepts", &DocumentProfile::general_concepts)
      .def("normalize", &DocumentProfile::normalize)
      .def("contains", &DocumentProfile::contains)
      .def("__len__", &DocumentProfile::size)
      .def("__repr__", [](const DocumentProfile& p) {
        return "DocumentProfile('" + p.doc_id + "', " + std::to_string(p.size()) + " concepts)";
      });

  py::class_<ConceptGraph>(m, "ConceptGraph")
      .def_static("load", &ConceptGraph::load, py::arg("path"))
      .def("total_count", &ConceptGraph::total_count)
      .def("contains", &ConceptGraph::contains, py::arg("concept"))
      .def("ids", &ConceptGraph::ids)
      .def("title",
           [](const ConceptGraph& g, ConceptId id) { return g.info(id).title; },
           py::arg("concept"))
      .def("is_named_entity", &ConceptGraph::is_named_entity, py::arg("concept"))
      .def("resolve_label",
           [](const ConceptGraph& g, const std::string& surface) -> std::optional<ConceptId> {
             return g.resolve_label(surface);
           },
           py::arg("surface"))
      .def("link_rel", &ConceptGraph::link_rel, py::arg("w1"), py::arg("w2"))
      .def("d_rel", &ConceptGraph::d_rel, py::arg("concept"), py::arg("profile"));

  m.def("annotate",
        [](const ConceptGraph& graph, const std::string& doc_id, const std::string& text) {
          return annotate(graph, RawDocument{doc_id, text});
        },
        py::arg("graph"), py::arg("doc_id"), py::arg("text"));

  py::class_<GpConfig>(m, "GpConfig")
      .def(py::init<>())
      .def_readwrite("generations", &GpConfig::generations)
      .def_readwrite("subpopulations", &GpConfig::subpopulations)
      .def_readwrite("subpopulation_size", &GpConfig::subpopulation_size)
      .def_readwrite("crossover_prob", &GpConfig::crossover_prob)
      .def_readwrite("mutation_prob", &GpConfig::mutation_prob)
      .def_readwrite("per_node_mutation_rate", &GpConfig::per_node_mutation_rate)
      .def_readwrite("initial_depth", &GpConfig::initial_depth)
      .def_readwrite("max_crossover_depth", &GpConfig::max_crossover_depth)
      .def_readwrite("terminal_cap", &GpConfig::terminal_cap)
      .def_readwrite("seed", &GpConfig::seed);

  py::class_<WikiEsRule>(m, "Rule")
      .def_property_readonly("matcher",
                             [](const WikiEsRule& r) {
                               return std::string(matcher_name(r.sensitivity.matcher));
                             })
      .def_property_readonly("c1", [](const WikiEsRule& r) { return r.sensitivity.c1; })
      .def_property_readonly("c2", [](const WikiEsRule& r) { return r.sensitivity.c2; })
      .def_property_readonly("terminal_set",
                             [](const WikiEsRule& r) { return r.terminal_set; })
      .def_property_readonly("queries",
                             [](const WikiEsRule& r) {
                               std::vector<std::pair<std::string, double>> out;
                               for (const ScoredQuery& q : r.queries)
                                 out.emplace_back(format_expression(q.tree), q.fitness);
                               return out;
                             })
      .def("serialize", &serialize_rule)
      .def("save", [](const WikiEsRule& r, const std::string& path) { save_rule(r, path); },
           py::arg("path"))
      .def("__repr__", [](const WikiEsRule& r) {
        return "Rule(" + std::to_string(r.queries.size()) + " queries, matcher=" +
               std::string(matcher_name(r.sensitivity.matcher)) + ")";
      });

  m.def("load_rule", &load_rule, py::arg("path"));
  m.def("parse_rule", &parse_rule, py::arg("text"));

  m.def("train",
        [](const ConceptGraph& graph, const std::string& corpus_path, const GpConfig& cfg,
           const std::string& matcher, double c1, double c2, int threads,
           const std::string& qrels) {
          SensitivityConfig sens;
          sens.c1 = c1;
          sens.c2 = c2;
          sens.matcher = matcher_from_name(matcher);
          EvolveOptions opts;
          opts.threads = threads;
          TrainResult result;
          {
            py::gil_scoped_release release;
            std::vector<CorpusRecord> records = load_labelled(corpus_path, qrels);
            result = train_rule(records, graph, cfg, sens, opts);
          }
          return py::make_tuple(std::move(result.rule), metrics_dict(result.training_report));
        },
        py::arg("graph"), py::arg("corpus"), py::arg("config"), py::arg("matcher") = "wiki",
        py::arg("c1") = 0.95, py::arg("c2") = 0.5, py::arg("threads") = 0,
        py::arg("qrels") = "");

  m.def("evaluate",
        [](const WikiEsRule& rule, const ConceptGraph& graph, const std::string& corpus_path,
           const std::string& qrels) {
          MetricsReport report;
          {
            py::gil_scoped_release release;
            ActiveRule active(rule, graph);
            report = active.score_records(load_labelled(corpus_path, qrels));
          }
          return metrics_dict(report);
        },
        py::arg("rule"), py::arg("graph"), py::arg("corpus"), py::arg("qrels") = "");

  m.def("filter_corpus",
        [](const WikiEsRule& rule, const ConceptGraph& graph, const std::string& corpus_path) {
          std::vector<std::pair<std::string, double>> out;
          {
            py::gil_scoped_release release;
            ActiveRule active(rule, graph);
            for (const CorpusRecord& rec : load_corpus(corpus_path)) {
              double mu = active.vote_on(rec);
              if (mu > 0.5) out.emplace_back(rec.doc_id, mu);
            }
          }
          return out;
        },
        py::arg("rule"), py::arg("graph"), py::arg("corpus"));

  m.def("calibrate",
        [](const ConceptGraph& graph, const std::string& corpus_path,
           std::optional<std::vector<double>> c1_grid,
           std::optional<std::vector<double>> c2_grid, int terminal_cap,
           const std::string& qrels) {
          ThresholdGrid grid;
          if (c1_grid) grid.c1 = *c1_grid;
          if (c2_grid) grid.c2 = *c2_grid;
          SensitivityConfig sens;
          {
            py::gil_scoped_release release;
            std::vector<CorpusRecord> records = load_labelled(corpus_path, qrels);
            TrainingSet set = labeled_set(records, wiki_profiles(records, graph));
            sens = calibrate_thresholds(set, graph, grid, terminal_cap);
          }
          return py::make_tuple(sens.c1, sens.c2);
        },
        py::arg("graph"), py::arg("corpus"), py::arg("c1_grid") = std::nullopt,
        py::arg("c2_grid") = std::nullopt, py::arg("terminal_cap") = 15, py::arg("qrels") = "");

  m.def("vote",
        [](const WikiEsRule& rule, const ConceptGraph& graph, const DocumentProfile& profile) {
          return vote(rule, graph, profile);
        },
        py::arg("rule"), py::arg("graph"), py::arg("profile"));
  m.def("classify",
        [](const WikiEsRule& rule, const ConceptGraph& graph, const DocumentProfile& profile) {
          return classify(rule, graph, profile);
        },
        py::arg("rule"), py::arg("graph"), py::arg("profile"));

  m.def("compare_f_scores",
        [](const std::vector<std::pair<std::string, double>>& named_f) {
          std::vector<NamedReport> reports;
          for (const auto& [name, f] : named_f) {
            NamedReport r;
            r.name = name;
            r.report.f_score = f;
            reports.push_back(std::move(r));
          }
          ComparisonMatrix matrix = compare(reports);
          py::dict out;
          for (std::size_t i = 0; i < matrix.names.size(); ++i) {
            py::dict row;
            for (std::size_t j = 0; j < matrix.names.size(); ++j) {
              if (matrix.cells[i][j].defined)
                row[py::str(matrix.names[j])] = matrix.cells[i][j].percent;
              else
                row[py::str(matrix.names[j])] = py::none();
            }
            out[py::str(matrix.names[i])] = row;
          }
          return out;
        },
        py::arg("named_f_scores"));

  m.attr("__version__") = "0.1.0";
}
