#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wikies/document_profile.hpp"

namespace wikies {

// One line of a corpus file. Exactly one of text/concepts is set: raw
// records go through the annotator, pre-annotated ones are validated
// against the graph directly.
struct CorpusRecord {
  std::string doc_id;
  std::optional<std::string> text;
  std::optional<std::vector<ConceptId>> concepts;
  std::optional<int> relevance;
};

// Reads a line-delimited corpus file. Each line is a JSON object with
// doc_id (string), exactly one of text (string) or concepts (array of
// integers), and an optional relevance flag (0 or 1). Doc ids must be
// unique.
std::vector<CorpusRecord> load_corpus(const std::string& path);

// Reads a qrels-style relevance file ("topic TAB doc TAB rel" lines) and
// stamps the labels onto matching records. The file must cover a single
// topic; judgments for unknown doc ids are an error.
void apply_qrels(const std::string& path, std::vector<CorpusRecord>& records);

}  // namespace wikies
