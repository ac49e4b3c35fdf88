#include "wikies/token_space.hpp"

#include <algorithm>
#include <set>

#include "wikies/error.hpp"
#include "wikies/text.hpp"

namespace wikies {

std::vector<std::string> TokenSpace::tokens_of(const CorpusRecord& rec, const ConceptGraph& base) {
  if (rec.text) return tokenize(*rec.text);
  std::vector<std::string> tokens;
  for (ConceptId id : *rec.concepts) {
    std::vector<std::string> words = tokenize(base.info(id).title);
    tokens.insert(tokens.end(), words.begin(), words.end());
  }
  return tokens;
}

TokenSpace TokenSpace::build(const std::vector<CorpusRecord>& records, const ConceptGraph& base) {
  std::set<std::string> seen;
  for (const CorpusRecord& rec : records) {
    std::vector<std::string> tokens = tokens_of(rec, base);
    seen.insert(tokens.begin(), tokens.end());
  }
  if (seen.empty()) throw Error("corpus yields no tokens");

  std::vector<std::pair<ConceptId, std::string>> vocab;
  vocab.reserve(seen.size());
  ConceptId next = 1;
  for (const std::string& token : seen) vocab.emplace_back(next++, token);

  TokenSpace space;
  space.finish(std::move(vocab));
  return space;
}

TokenSpace TokenSpace::from_vocab(std::vector<std::pair<ConceptId, std::string>> vocab) {
  if (vocab.empty()) throw Error("token vocabulary is empty");
  TokenSpace space;
  space.finish(std::move(vocab));
  return space;
}

void TokenSpace::finish(std::vector<std::pair<ConceptId, std::string>> vocab) {
  vocab_ = std::move(vocab);
  std::vector<ConceptEntry> entries;
  entries.reserve(vocab_.size());
  for (const auto& [id, token] : vocab_) {
    ConceptEntry e;
    e.info.id = id;
    e.info.title = token;
    entries.push_back(std::move(e));
    if (!by_token_.emplace(token, id).second)
      throw Error("token vocabulary has duplicate token '" + token + "'");
  }
  graph_ = ConceptGraph::from_entries(std::move(entries));
}

DocumentProfile TokenSpace::profile_of(const CorpusRecord& rec, const ConceptGraph& base) const {
  DocumentProfile profile;
  profile.doc_id = rec.doc_id;
  for (const std::string& token : tokens_of(rec, base)) {
    auto it = by_token_.find(token);
    if (it != by_token_.end()) profile.general_concepts.push_back(it->second);
  }
  profile.normalize();
  return profile;
}

}  // namespace wikies
