#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace wikies {

using ConceptId = std::int64_t;

// A document reduced to the concepts found in it, split into named entities
// and general concepts. The two sets are disjoint; membership in one or the
// other follows the named-entity flag of the graph the profile was built
// against. Ids are kept sorted for cheap membership tests and merging.
struct DocumentProfile {
  std::string doc_id;
  std::vector<ConceptId> named_entities;
  std::vector<ConceptId> general_concepts;

  static DocumentProfile make(std::string doc_id, std::vector<ConceptId> named,
                              std::vector<ConceptId> general) {
    DocumentProfile p;
    p.doc_id = std::move(doc_id);
    p.named_entities = std::move(named);
    p.general_concepts = std::move(general);
    p.normalize();
    return p;
  }

  void normalize() {
    auto tidy = [](std::vector<ConceptId>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    tidy(named_entities);
    tidy(general_concepts);
  }

  bool contains(ConceptId id) const {
    return std::binary_search(named_entities.begin(), named_entities.end(), id) ||
           std::binary_search(general_concepts.begin(), general_concepts.end(), id);
  }

  bool empty() const { return named_entities.empty() && general_concepts.empty(); }

  std::size_t size() const { return named_entities.size() + general_concepts.size(); }

  // All concepts of the profile, named entities first.
  std::vector<ConceptId> all_concepts() const {
    std::vector<ConceptId> out;
    out.reserve(size());
    out.insert(out.end(), named_entities.begin(), named_entities.end());
    out.insert(out.end(), general_concepts.begin(), general_concepts.end());
    return out;
  }

  bool operator==(const DocumentProfile&) const = default;
};

}  // namespace wikies
