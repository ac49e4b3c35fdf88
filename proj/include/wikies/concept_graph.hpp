#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wikies/document_profile.hpp"

namespace wikies {

// One article standing in for a concept. Labels are the title plus any
// redirects and anchor texts; the named-entity flag selects the stricter
// acceptance threshold during query evaluation.
struct Concept {
  ConceptId id = 0;
  std::string title;
  std::vector<std::string> redirects;
  std::vector<std::string> anchors;
  bool is_named_entity = false;
};

// Inlink sets for a concept, i.e. the ids of concepts whose articles link
// to it. Stored sorted and deduplicated so intersections run as linear
// merges.
struct ConceptEntry {
  Concept info;
  std::vector<ConceptId> inlinks;
};

// The link structure the relatedness measures run on. Immutable after
// construction; every read operation is safe for unrestricted concurrent
// use.
class ConceptGraph {
 public:
  // Reads a line-delimited file with one JSON object per line. Fields:
  // id (integer, required), title (string, required), redirects (array of
  // strings), anchors (array of strings), inlinks (array of integers),
  // named_entity (boolean). Rejects empty files, duplicate ids and inlink
  // references to unknown ids.
  static ConceptGraph load(const std::string& path);

  // Builds a graph from in-memory records; same validation as load().
  static ConceptGraph from_entries(std::vector<ConceptEntry> entries);

  std::size_t total_count() const { return entries_.size(); }
  bool contains(ConceptId id) const { return entries_.find(id) != entries_.end(); }

  const Concept& info(ConceptId id) const { return entry(id).info; }
  const std::vector<ConceptId>& inlinks(ConceptId id) const { return entry(id).inlinks; }
  bool is_named_entity(ConceptId id) const { return entry(id).info.is_named_entity; }

  // Ids in ascending order; handy for deterministic iteration.
  std::vector<ConceptId> ids() const;

  // Maps a surface string to a concept whose title, redirect or anchor
  // matches it after case folding. Ambiguous labels go to the concept with
  // the most inlinks, then to the smaller id. Empty when nothing matches.
  std::optional<ConceptId> resolve_label(std::string_view surface) const;

  // Picks among candidate ids the way resolve_label does.
  std::optional<ConceptId> pick_most_common(const std::vector<ConceptId>& candidates) const;

  // Concepts registered for a label key (see text.hpp). Null when the key
  // is unknown.
  const std::vector<ConceptId>* label_candidates(const std::string& key) const;

  // Link-overlap relatedness in [0, 1]. Identical concepts with at least
  // one inlink score 1; disjoint inlink sets score 0. Symmetric.
  double link_rel(ConceptId w1, ConceptId w2) const;

  // Highest link_rel between w and any concept in the profile; 0 for an
  // empty profile.
  double d_rel(ConceptId w, const DocumentProfile& profile) const;

 private:
  const ConceptEntry& entry(ConceptId id) const;
  void index_labels();

  std::unordered_map<ConceptId, ConceptEntry> entries_;
  std::unordered_map<std::string, std::vector<ConceptId>> labels_;
};

}  // namespace wikies
