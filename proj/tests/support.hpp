#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wikies/concept_graph.hpp"
#include "wikies/corpus.hpp"
#include "wikies/rng.hpp"

namespace testutil {

using wikies::ConceptEntry;
using wikies::ConceptGraph;
using wikies::ConceptId;

inline ConceptEntry make_entry(ConceptId id, std::string title, bool named,
                               std::vector<ConceptId> inlinks,
                               std::vector<std::string> redirects = {},
                               std::vector<std::string> anchors = {}) {
  ConceptEntry e;
  e.info.id = id;
  e.info.title = std::move(title);
  e.info.is_named_entity = named;
  e.info.redirects = std::move(redirects);
  e.info.anchors = std::move(anchors);
  e.inlinks = std::move(inlinks);
  return e;
}

// 16 concepts with hand-set inlink overlaps:
//   link_rel(1, 2)  = 1 - log2/log8 = 2/3
//   link_rel(5, 6)  = 1 - log(6/5)/log(16/5), about 0.843252
//   link_rel(3, 10) = 0 (disjoint inlink sets)
// "bank" is ambiguous between 8 (4 inlinks) and 9 (10 inlinks).
inline std::vector<ConceptEntry> fixture_entries() {
  return {
      make_entry(1, "Espionage", false, {3, 4, 5, 6}, {"Spying"}),
      make_entry(2, "Lawsuit", false, {5, 6}, {}, {"civil court", "allegation"}),
      make_entry(3, "Goldman Sachs", true, {7, 8, 9}),
      make_entry(4, "Morgan Stanley", true, {7, 8}),
      make_entry(5, "BMW", true, {8, 9, 10, 11, 12}),
      make_entry(6, "Volkswagen", true, {8, 9, 10, 11, 12, 13}, {"VW"}),
      make_entry(7, "Mortgage", false, {1, 2}),
      make_entry(8, "Credit", false, {2, 3, 4, 5}, {}, {"bank"}),
      make_entry(9, "Investment Banking", false, {1, 2, 3, 4, 5, 6, 7, 8, 10, 11}, {}, {"bank"}),
      make_entry(10, "Football", false, {14, 15, 16}),
      make_entry(11, "Trade Secret", false, {1, 2, 3}),
      make_entry(12, "Classified Information", false, {1}),
      make_entry(13, "Stadium", false, {10, 14}),
      make_entry(14, "Referee", false, {10}),
      make_entry(15, "Goal", false, {10, 13}),
      make_entry(16, "Penalty", false, {10, 13, 14}),
  };
}

inline ConceptGraph fixture_graph() { return ConceptGraph::from_entries(fixture_entries()); }

inline std::string entry_json(const ConceptEntry& e) {
  std::ostringstream out;
  out << "{\"id\": " << e.info.id << ", \"title\": \"" << e.info.title << "\"";
  auto strings = [&out](const char* key, const std::vector<std::string>& items) {
    if (items.empty()) return;
    out << ", \"" << key << "\": [";
    for (std::size_t i = 0; i < items.size(); ++i)
      out << (i ? ", " : "") << "\"" << items[i] << "\"";
    out << "]";
  };
  strings("redirects", e.info.redirects);
  strings("anchors", e.info.anchors);
  out << ", \"inlinks\": [";
  for (std::size_t i = 0; i < e.inlinks.size(); ++i) out << (i ? ", " : "") << e.inlinks[i];
  out << "], \"named_entity\": " << (e.info.is_named_entity ? "true" : "false") << "}";
  return out.str();
}

inline std::string entries_jsonl(const std::vector<ConceptEntry>& entries) {
  std::string out;
  for (const auto& e : entries) out += entry_json(e) + "\n";
  return out;
}

inline std::string fixture_jsonl() { return entries_jsonl(fixture_entries()); }

// A membership-only world: relatedness never fires because nothing has
// inlinks. Labels equal the planted query (w3 AND w7) OR w12 exactly.
struct PlantedFixture {
  std::vector<ConceptEntry> entries;
  std::vector<wikies::CorpusRecord> records;
};

inline PlantedFixture planted_fixture(std::size_t docs, std::uint64_t seed) {
  PlantedFixture fx;
  for (ConceptId id = 1; id <= 20; ++id)
    fx.entries.push_back(make_entry(id, "topic" + std::to_string(id), false, {}));

  wikies::Rng rng(seed);
  for (std::size_t i = 0; i < docs; ++i) {
    wikies::CorpusRecord rec;
    rec.doc_id = "d" + std::to_string(i);
    std::vector<ConceptId> present;
    for (ConceptId id = 1; id <= 20; ++id)
      if (rng.unit() < 0.25) present.push_back(id);
    bool rel = (std::find(present.begin(), present.end(), 3) != present.end() &&
                std::find(present.begin(), present.end(), 7) != present.end()) ||
               std::find(present.begin(), present.end(), 12) != present.end();
    rec.concepts = std::move(present);
    rec.relevance = rel ? 1 : 0;
    fx.records.push_back(std::move(rec));
  }
  return fx;
}

inline std::string records_jsonl(const std::vector<wikies::CorpusRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    std::ostringstream line;
    line << "{\"doc_id\": \"" << rec.doc_id << "\"";
    if (rec.text) line << ", \"text\": \"" << *rec.text << "\"";
    if (rec.concepts) {
      line << ", \"concepts\": [";
      for (std::size_t i = 0; i < rec.concepts->size(); ++i)
        line << (i ? ", " : "") << (*rec.concepts)[i];
      line << "]";
    }
    if (rec.relevance) line << ", \"relevance\": " << *rec.relevance;
    line << "}";
    out += line.str() + "\n";
  }
  return out;
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "wikies-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }

  std::string file(const std::string& name, const std::string& content) const {
    std::string full = path_ + "/" + name;
    std::ofstream out(full);
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + full);
    return full;
  }

 private:
  std::string path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  q += "'";
  return q;
}

inline CliResult run_cli(const std::vector<std::string>& args, const TempDir& dir) {
  std::string out_path = dir.path() + "/.cli_out";
  std::string err_path = dir.path() + "/.cli_err";
  std::string cmd = shell_quote(WIKIES_CLI_PATH);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " >" + shell_quote(out_path) + " 2>" + shell_quote(err_path);
  int rc = std::system(cmd.c_str());
  CliResult res;
  res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(out_path);
  res.err = slurp(err_path);
  return res;
}

}  // namespace testutil
