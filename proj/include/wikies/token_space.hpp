#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wikies/concept_graph.hpp"
#include "wikies/corpus.hpp"
#include "wikies/document_profile.hpp"

namespace wikies {

// Bag-of-words universe for the exact-token baseline. Every distinct token
// becomes a pseudo-concept with no inlinks, so queries over tokens run on
// the ordinary evaluation machinery with the exact matcher.
class TokenSpace {
 public:
  // Vocabulary from a corpus: tokens of each text record, or the folded
  // title words of each listed concept for pre-annotated records. Ids are
  // assigned 1..N over the sorted vocabulary.
  static TokenSpace build(const std::vector<CorpusRecord>& records, const ConceptGraph& base);

  // Vocabulary recovered from a rule file's id-to-token table, preserving
  // the recorded ids.
  static TokenSpace from_vocab(std::vector<std::pair<ConceptId, std::string>> vocab);

  const ConceptGraph& graph() const { return graph_; }
  const std::vector<std::pair<ConceptId, std::string>>& vocab() const { return vocab_; }

  // Bag-of-words profile of one record; tokens outside the vocabulary are
  // dropped. base resolves concept titles of pre-annotated records.
  DocumentProfile profile_of(const CorpusRecord& rec, const ConceptGraph& base) const;

  // The words standing in for one record: its text tokens, or its
  // concepts' title tokens.
  static std::vector<std::string> tokens_of(const CorpusRecord& rec, const ConceptGraph& base);

 private:
  TokenSpace() = default;
  void finish(std::vector<std::pair<ConceptId, std::string>> vocab);

  ConceptGraph graph_;
  std::vector<std::pair<ConceptId, std::string>> vocab_;
  std::unordered_map<std::string, ConceptId> by_token_;
};

}  // namespace wikies
