#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wikies/concept_graph.hpp"
#include "wikies/document_profile.hpp"

namespace wikies {

enum class NodeKind : std::uint8_t { kAnd, kOr, kNot, kTerminal };

constexpr bool is_operator(NodeKind k) { return k != NodeKind::kTerminal; }
constexpr int arity(NodeKind k) {
  return k == NodeKind::kTerminal ? 0 : (k == NodeKind::kNot ? 1 : 2);
}

struct QueryNode {
  NodeKind kind = NodeKind::kTerminal;
  ConceptId terminal = 0;

  friend bool operator==(const QueryNode&, const QueryNode&) = default;
};

// A boolean query as a syntax tree, stored as a preorder node vector so a
// subtree is always one contiguous slice. AND/OR take two children, NOT
// one; leaves are concept terminals. The root sits at depth 0.
class QueryTree {
 public:
  QueryTree() = default;

  static QueryTree terminal(ConceptId id);
  static QueryTree negate(QueryTree child);
  static QueryTree combine(NodeKind op, QueryTree left, QueryTree right);

  // Adopts a preorder vector, rejecting arity violations, trailing nodes
  // and emptiness.
  static QueryTree from_nodes(std::vector<QueryNode> nodes);

  const std::vector<QueryNode>& nodes() const { return nodes_; }
  std::size_t node_count() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  int depth() const;
  // Depth of the node at preorder position pos.
  int depth_at(std::size_t pos) const;
  // Height of the subtree rooted at pos; a terminal alone has height 0.
  int subtree_height(std::size_t pos) const;
  // One past the last node of the subtree rooted at pos.
  std::size_t subtree_end(std::size_t pos) const;

  // Offspring of exchanging the subtrees rooted at pos_a / pos_b.
  static std::pair<QueryTree, QueryTree> swap_subtrees(const QueryTree& a, std::size_t pos_a,
                                                       const QueryTree& b, std::size_t pos_b);

  // Evaluates bottom-up given a terminal resolver bool(ConceptId).
  template <typename TerminalEval>
  bool evaluate(TerminalEval&& resolve) const {
    std::size_t pos = 0;
    return eval_at(pos, resolve);
  }

  // In-place primitive replacement for mutation; the new kind must have
  // the arity of the old one.
  void replace_primitive(std::size_t pos, NodeKind kind, ConceptId terminal);

  friend bool operator==(const QueryTree&, const QueryTree&) = default;

 private:
  template <typename TerminalEval>
  bool eval_at(std::size_t& pos, TerminalEval& resolve) const {
    const QueryNode& node = nodes_[pos++];
    switch (node.kind) {
      case NodeKind::kTerminal: return resolve(node.terminal);
      case NodeKind::kNot: return !eval_at(pos, resolve);
      case NodeKind::kAnd: {
        bool left = eval_at(pos, resolve);
        bool right = eval_at(pos, resolve);
        return left && right;
      }
      case NodeKind::kOr: {
        bool left = eval_at(pos, resolve);
        bool right = eval_at(pos, resolve);
        return left || right;
      }
    }
    return false;
  }

  void validate() const;

  std::vector<QueryNode> nodes_;
};

enum class Matcher { kWikiRelatedness, kExactToken };

std::string_view matcher_name(Matcher m);
Matcher matcher_from_name(std::string_view name);

// Acceptance sensitivity of the concept-evaluator. Named entities must
// clear the stricter c1; general concepts clear c2.
struct SensitivityConfig {
  double c1 = 0.95;
  double c2 = 0.5;
  Matcher matcher = Matcher::kWikiRelatedness;

  void check() const;
};

// One evolved query with the training fitness it earned, which doubles as
// its voting weight.
struct ScoredQuery {
  QueryTree tree;
  double fitness = 0.0;
};

// A voting ensemble of queries. terminal_set records the vocabulary the
// queries were built over; token_vocab maps terminal ids back to surface
// tokens for exact-matcher rules so they can be re-grounded on any corpus.
struct WikiEsRule {
  std::vector<ScoredQuery> queries;
  SensitivityConfig sensitivity;
  std::vector<ConceptId> terminal_set;
  std::vector<std::pair<ConceptId, std::string>> token_vocab;
};

// The concept-evaluator: true when v sits in the profile, or (wiki
// matcher only) when the profile holds a concept related to v above the
// threshold for v's kind.
bool eval_concept(const ConceptGraph& graph, ConceptId v, const DocumentProfile& profile,
                  const SensitivityConfig& cfg);

bool eval_query(const ConceptGraph& graph, const QueryTree& q, const DocumentProfile& profile,
                const SensitivityConfig& cfg);

// Fitness-weighted vote over the rule's queries, in [0, 1]. An all-zero
// weight vector votes 0.
double vote(const WikiEsRule& rule, const ConceptGraph& graph, const DocumentProfile& profile);

// Relevant iff vote > 0.5, strictly.
bool classify(const WikiEsRule& rule, const ConceptGraph& graph, const DocumentProfile& profile);

// Prefix notation: "(OR (AND w1 w2) (AND w3 (NOT w4)))"; a bare terminal
// is "w4".
std::string format_expression(const QueryTree& q);
QueryTree parse_expression(std::string_view text);

// Canonical rule file, one JSON object. Fixed key order and number
// formatting, so equal rules serialize to equal bytes.
std::string serialize_rule(const WikiEsRule& rule);
WikiEsRule parse_rule(const std::string& text);

void save_rule(const WikiEsRule& rule, const std::string& path);
WikiEsRule load_rule(const std::string& path);

}  // namespace wikies
