#pragma once

#include <string>
#include <vector>

#include "wikies/concept_graph.hpp"
#include "wikies/corpus.hpp"
#include "wikies/document_profile.hpp"

namespace wikies {

struct RawDocument {
  std::string doc_id;
  std::string text;
};

// Dictionary annotation: scans the token stream left to right, grabbing
// the longest label span (up to six tokens) the graph knows, and routes
// each resolved concept into the named-entity or general set by its graph
// flag. Unmatchable text is skipped.
DocumentProfile annotate(const ConceptGraph& graph, const RawDocument& doc);

// Turns one corpus record into a profile: text records run through
// annotate, pre-annotated records are checked against the graph and split
// by the named-entity flags.
DocumentProfile profile_of_record(const ConceptGraph& graph, const CorpusRecord& rec);

// Loads a corpus file and converts every record.
std::vector<DocumentProfile> load_profiles(const std::string& path, const ConceptGraph& graph);

}  // namespace wikies
