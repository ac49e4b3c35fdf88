#include "wikies/annotator.hpp"

#include "wikies/error.hpp"
#include "wikies/text.hpp"

namespace wikies {

namespace {
constexpr std::size_t kMaxLabelTokens = 6;
}

DocumentProfile annotate(const ConceptGraph& graph, const RawDocument& doc) {
  DocumentProfile profile;
  profile.doc_id = doc.doc_id;

  std::vector<std::string> tokens = tokenize(doc.text);
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t advance = 1;
    std::size_t longest = std::min(kMaxLabelTokens, tokens.size() - i);
    for (std::size_t len = longest; len >= 1; --len) {
      const auto* candidates = graph.label_candidates(label_key(tokens, i, len));
      if (!candidates) continue;
      if (auto id = graph.pick_most_common(*candidates)) {
        if (graph.is_named_entity(*id)) profile.named_entities.push_back(*id);
        else profile.general_concepts.push_back(*id);
        advance = len;
      }
      break;
    }
    i += advance;
  }
  profile.normalize();
  return profile;
}

DocumentProfile profile_of_record(const ConceptGraph& graph, const CorpusRecord& rec) {
  if (rec.text) return annotate(graph, RawDocument{rec.doc_id, *rec.text});

  DocumentProfile profile;
  profile.doc_id = rec.doc_id;
  for (ConceptId id : *rec.concepts) {
    if (!graph.contains(id))
      throw Error("doc '" + rec.doc_id + "' references unknown concept " + std::to_string(id));
    if (graph.is_named_entity(id)) profile.named_entities.push_back(id);
    else profile.general_concepts.push_back(id);
  }
  profile.normalize();
  return profile;
}

std::vector<DocumentProfile> load_profiles(const std::string& path, const ConceptGraph& graph) {
  std::vector<DocumentProfile> profiles;
  for (const CorpusRecord& rec : load_corpus(path))
    profiles.push_back(profile_of_record(graph, rec));
  return profiles;
}

}  // namespace wikies
