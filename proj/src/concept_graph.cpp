#include "wikies/concept_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "wikies/error.hpp"
#include "wikies/log.hpp"
#include "wikies/text.hpp"

namespace wikies {
namespace {

using nlohmann::json;

ConceptEntry parse_entry(const json& j, std::size_t line_no) {
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("concept graph line " + std::to_string(line_no) + ": " + what);
  };
  if (!j.is_object()) throw fail("expected a JSON object");
  if (!j.contains("id") || !j.at("id").is_number_integer())
    throw fail("missing integer field 'id'");
  if (!j.contains("title") || !j.at("title").is_string())
    throw fail("missing string field 'title'");

  ConceptEntry e;
  e.info.id = j.at("id").get<ConceptId>();
  e.info.title = j.at("title").get<std::string>();
  if (e.info.title.empty()) throw fail("empty title");
  if (j.contains("redirects")) e.info.redirects = j.at("redirects").get<std::vector<std::string>>();
  if (j.contains("anchors")) e.info.anchors = j.at("anchors").get<std::vector<std::string>>();
  if (j.contains("named_entity")) e.info.is_named_entity = j.at("named_entity").get<bool>();
  if (j.contains("inlinks")) e.inlinks = j.at("inlinks").get<std::vector<ConceptId>>();
  return e;
}

}  // namespace

ConceptGraph ConceptGraph::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open concept graph file: " + path);

  std::vector<ConceptEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& ex) {
      throw ParseError("concept graph line " + std::to_string(line_no) + ": " + ex.what());
    }
    entries.push_back(parse_entry(j, line_no));
  }
  return from_entries(std::move(entries));
}

ConceptGraph ConceptGraph::from_entries(std::vector<ConceptEntry> entries) {
  if (entries.empty()) throw Error("concept graph contains no concepts");

  ConceptGraph g;
  g.entries_.reserve(entries.size());
  for (auto& e : entries) {
    std::sort(e.inlinks.begin(), e.inlinks.end());
    e.inlinks.erase(std::unique(e.inlinks.begin(), e.inlinks.end()), e.inlinks.end());
    ConceptId id = e.info.id;
    if (e.info.title.empty())
      throw Error("concept " + std::to_string(id) + " has an empty title");
    if (!g.entries_.emplace(id, std::move(e)).second)
      throw Error("concept graph has duplicate id " + std::to_string(id));
  }
  for (const auto& [id, e] : g.entries_) {
    for (ConceptId src : e.inlinks) {
      if (!g.contains(src))
        throw Error("concept " + std::to_string(id) + " lists unknown inlink " +
                    std::to_string(src));
    }
  }
  g.index_labels();
  return g;
}

void ConceptGraph::index_labels() {
  auto add = [this](const std::string& surface, ConceptId id) {
    std::string key = label_key_of(surface);
    if (key.empty()) return;
    auto& ids = labels_[key];
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  };
  for (const auto& [id, e] : entries_) {
    add(e.info.title, id);
    for (const auto& r : e.info.redirects) add(r, id);
    for (const auto& a : e.info.anchors) add(a, id);
  }
  for (auto& [key, ids] : labels_) std::sort(ids.begin(), ids.end());
}

std::vector<ConceptId> ConceptGraph::ids() const {
  std::vector<ConceptId> out;
  out.reserve(entries_.size());
  for (const auto& [id, e] : entries_) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

const ConceptEntry& ConceptGraph::entry(ConceptId id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw Error("unknown concept id " + std::to_string(id));
  return it->second;
}

const std::vector<ConceptId>* ConceptGraph::label_candidates(const std::string& key) const {
  auto it = labels_.find(key);
  return it == labels_.end() ? nullptr : &it->second;
}

std::optional<ConceptId> ConceptGraph::pick_most_common(
    const std::vector<ConceptId>& candidates) const {
  std::optional<ConceptId> best;
  std::size_t best_links = 0;
  for (ConceptId id : candidates) {
    auto it = entries_.find(id);
    if (it == entries_.end()) continue;
    std::size_t links = it->second.inlinks.size();
    if (!best || links > best_links || (links == best_links && id < *best)) {
      best = id;
      best_links = links;
    }
  }
  return best;
}

std::optional<ConceptId> ConceptGraph::resolve_label(std::string_view surface) const {
  const auto* ids = label_candidates(label_key_of(surface));
  if (!ids) return std::nullopt;
  return pick_most_common(*ids);
}

double ConceptGraph::link_rel(ConceptId w1, ConceptId w2) const {
  const auto& a = entry(w1).inlinks;
  const auto& b = entry(w2).inlinks;

  // A concept is maximally related to itself as long as anything links to
  // it at all.
  if (w1 == w2) return a.empty() ? 0.0 : 1.0;
  if (a.empty() || b.empty()) {
    logging::debug("link_rel: concept with no inlinks scores 0");
    return 0.0;
  }

  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else { ++common; ++i; ++j; }
  }
  if (common == 0) return 0.0;

  auto total = static_cast<double>(entries_.size());
  auto larger = static_cast<double>(std::max(a.size(), b.size()));
  auto smaller = static_cast<double>(std::min(a.size(), b.size()));
  if (smaller >= total) {
    logging::debug("link_rel: inlink set spans the whole graph, distance undefined");
    return 0.0;
  }

  double dist = (std::log(larger) - std::log(static_cast<double>(common))) /
                (std::log(total) - std::log(smaller));
  return 1.0 - std::clamp(dist, 0.0, 1.0);
}

double ConceptGraph::d_rel(ConceptId w, const DocumentProfile& profile) const {
  double best = 0.0;
  for (ConceptId c : profile.named_entities) best = std::max(best, link_rel(w, c));
  for (ConceptId c : profile.general_concepts) best = std::max(best, link_rel(w, c));
  return best;
}

}  // namespace wikies
