#include "wikies/corpus.hpp"

#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "wikies/error.hpp"

namespace wikies {
namespace {

using nlohmann::json;

CorpusRecord parse_record(const json& j, std::size_t line_no) {
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("corpus line " + std::to_string(line_no) + ": " + what);
  };
  if (!j.is_object()) throw fail("expected a JSON object");
  if (!j.contains("doc_id") || !j.at("doc_id").is_string())
    throw fail("missing string field 'doc_id'");

  CorpusRecord rec;
  rec.doc_id = j.at("doc_id").get<std::string>();
  if (rec.doc_id.empty()) throw fail("doc_id must be non-empty");

  bool has_text = j.contains("text");
  bool has_concepts = j.contains("concepts");
  if (has_text == has_concepts)
    throw fail("record '" + rec.doc_id + "' needs exactly one of 'text' or 'concepts'");
  if (has_text) {
    if (!j.at("text").is_string()) throw fail("'text' must be a string");
    rec.text = j.at("text").get<std::string>();
  } else {
    if (!j.at("concepts").is_array()) throw fail("'concepts' must be an array of integers");
    rec.concepts = j.at("concepts").get<std::vector<ConceptId>>();
  }
  if (j.contains("relevance")) {
    if (!j.at("relevance").is_number_integer())
      throw fail("'relevance' must be an integer");
    int r = j.at("relevance").get<int>();
    if (r != 0 && r != 1) throw fail("'relevance' must be 0 or 1");
    rec.relevance = r;
  }
  return rec;
}

}  // namespace

std::vector<CorpusRecord> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file: " + path);

  std::vector<CorpusRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& ex) {
      throw ParseError("corpus line " + std::to_string(line_no) + ": " + ex.what());
    }
    CorpusRecord rec = parse_record(j, line_no);
    if (!seen.insert(rec.doc_id).second)
      throw Error("corpus has duplicate doc_id '" + rec.doc_id + "'");
    records.push_back(std::move(rec));
  }
  return records;
}

void apply_qrels(const std::string& path, std::vector<CorpusRecord>& records) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open qrels file: " + path);

  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < records.size(); ++i) by_id[records[i].doc_id] = i;

  std::string topic_seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto fail = [&](const std::string& what) -> ParseError {
      return ParseError("qrels line " + std::to_string(line_no) + ": " + what);
    };

    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw fail("expected 'topic TAB doc TAB relevance'");
    std::string topic = line.substr(0, t1);
    std::string doc = line.substr(t1 + 1, t2 - t1 - 1);
    std::string rel = line.substr(t2 + 1);

    if (topic_seen.empty()) topic_seen = topic;
    else if (topic != topic_seen)
      throw fail("multiple topics ('" + topic_seen + "' and '" + topic +
                 "'); split the file per topic");
    if (rel != "0" && rel != "1") throw fail("relevance must be 0 or 1, got '" + rel + "'");

    auto it = by_id.find(doc);
    if (it == by_id.end()) throw fail("judgment for unknown doc_id '" + doc + "'");
    records[it->second].relevance = rel == "1" ? 1 : 0;
  }
}

}  // namespace wikies
