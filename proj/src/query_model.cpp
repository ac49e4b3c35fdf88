#include "wikies/query_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

#include <json.hpp>

#include "wikies/error.hpp"
#include "wikies/io.hpp"

namespace wikies {
namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string escape_json(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string_view op_name(NodeKind k) {
  switch (k) {
    case NodeKind::kAnd: return "AND";
    case NodeKind::kOr: return "OR";
    case NodeKind::kNot: return "NOT";
    case NodeKind::kTerminal: break;
  }
  return "?";
}

}  // namespace

QueryTree QueryTree::terminal(ConceptId id) {
  QueryTree t;
  t.nodes_.push_back({NodeKind::kTerminal, id});
  return t;
}

QueryTree QueryTree::negate(QueryTree child) {
  QueryTree t;
  t.nodes_.reserve(child.nodes_.size() + 1);
  t.nodes_.push_back({NodeKind::kNot, 0});
  t.nodes_.insert(t.nodes_.end(), child.nodes_.begin(), child.nodes_.end());
  t.validate();
  return t;
}

QueryTree QueryTree::combine(NodeKind op, QueryTree left, QueryTree right) {
  if (arity(op) != 2) throw Error("combine needs a binary operator");
  QueryTree t;
  t.nodes_.reserve(left.nodes_.size() + right.nodes_.size() + 1);
  t.nodes_.push_back({op, 0});
  t.nodes_.insert(t.nodes_.end(), left.nodes_.begin(), left.nodes_.end());
  t.nodes_.insert(t.nodes_.end(), right.nodes_.begin(), right.nodes_.end());
  t.validate();
  return t;
}

QueryTree QueryTree::from_nodes(std::vector<QueryNode> nodes) {
  QueryTree t;
  t.nodes_ = std::move(nodes);
  t.validate();
  return t;
}

void QueryTree::validate() const {
  if (nodes_.empty()) throw Error("query tree is empty");
  std::size_t end = subtree_end(0);
  if (end != nodes_.size()) throw Error("query tree has trailing nodes");
}

std::size_t QueryTree::subtree_end(std::size_t pos) const {
  std::size_t need = 1;
  std::size_t i = pos;
  while (need > 0) {
    if (i >= nodes_.size()) throw Error("query tree is truncated");
    need += static_cast<std::size_t>(arity(nodes_[i].kind));
    --need;
    ++i;
  }
  return i;
}

namespace {
int height_at(const std::vector<QueryNode>& nodes, std::size_t& pos) {
  const QueryNode& n = nodes[pos++];
  int best = 0;
  for (int i = 0; i < arity(n.kind); ++i) best = std::max(best, 1 + height_at(nodes, pos));
  return best;
}
}  // namespace

int QueryTree::depth() const { return subtree_height(0); }

int QueryTree::subtree_height(std::size_t pos) const {
  if (pos >= nodes_.size()) throw Error("node position out of range");
  return height_at(nodes_, pos);
}

int QueryTree::depth_at(std::size_t pos) const {
  if (pos >= nodes_.size()) throw Error("node position out of range");
  // Preorder scan tracking the depth of each node until pos is reached.
  std::vector<int> pending;  // children still owed at each open depth
  int depth = 0;
  for (std::size_t i = 0;; ++i) {
    if (i == pos) return depth;
    pending.push_back(arity(nodes_[i].kind));
    while (!pending.empty() && pending.back() == 0) {
      pending.pop_back();
      if (!pending.empty()) --pending.back();
    }
    depth = static_cast<int>(pending.size());
    if (pending.empty() && i + 1 <= pos) throw Error("node position out of range");
  }
}

std::pair<QueryTree, QueryTree> QueryTree::swap_subtrees(const QueryTree& a, std::size_t pos_a,
                                                         const QueryTree& b, std::size_t pos_b) {
  std::size_t end_a = a.subtree_end(pos_a);
  std::size_t end_b = b.subtree_end(pos_b);

  std::vector<QueryNode> out_a;
  out_a.reserve(a.nodes_.size() - (end_a - pos_a) + (end_b - pos_b));
  out_a.insert(out_a.end(), a.nodes_.begin(), a.nodes_.begin() + pos_a);
  out_a.insert(out_a.end(), b.nodes_.begin() + pos_b, b.nodes_.begin() + end_b);
  out_a.insert(out_a.end(), a.nodes_.begin() + end_a, a.nodes_.end());

  std::vector<QueryNode> out_b;
  out_b.reserve(b.nodes_.size() - (end_b - pos_b) + (end_a - pos_a));
  out_b.insert(out_b.end(), b.nodes_.begin(), b.nodes_.begin() + pos_b);
  out_b.insert(out_b.end(), a.nodes_.begin() + pos_a, a.nodes_.begin() + end_a);
  out_b.insert(out_b.end(), b.nodes_.begin() + end_b, b.nodes_.end());

  return {from_nodes(std::move(out_a)), from_nodes(std::move(out_b))};
}

void QueryTree::replace_primitive(std::size_t pos, NodeKind kind, ConceptId terminal) {
  if (pos >= nodes_.size()) throw Error("node position out of range");
  if (arity(kind) != arity(nodes_[pos].kind)) throw Error("mutation must preserve arity");
  nodes_[pos].kind = kind;
  nodes_[pos].terminal = kind == NodeKind::kTerminal ? terminal : 0;
}

std::string_view matcher_name(Matcher m) {
  return m == Matcher::kWikiRelatedness ? "wiki" : "exact";
}

Matcher matcher_from_name(std::string_view name) {
  if (name == "wiki") return Matcher::kWikiRelatedness;
  if (name == "exact") return Matcher::kExactToken;
  throw Error("unknown matcher '" + std::string(name) + "' (expected wiki or exact)");
}

void SensitivityConfig::check() const {
  if (!(c1 > 0.0 && c1 <= 1.0 && c2 > 0.0 && c2 <= 1.0))
    throw Error("sensitivity thresholds must lie in (0, 1]");
}

bool eval_concept(const ConceptGraph& graph, ConceptId v, const DocumentProfile& profile,
                  const SensitivityConfig& cfg) {
  if (!graph.contains(v)) throw Error("unknown concept id " + std::to_string(v));
  if (profile.contains(v)) return true;
  if (cfg.matcher == Matcher::kExactToken) return false;
  double threshold = graph.is_named_entity(v) ? cfg.c1 : cfg.c2;
  return graph.d_rel(v, profile) > threshold;
}

bool eval_query(const ConceptGraph& graph, const QueryTree& q, const DocumentProfile& profile,
                const SensitivityConfig& cfg) {
  if (q.empty()) throw Error("query tree is empty");
  return q.evaluate([&](ConceptId v) { return eval_concept(graph, v, profile, cfg); });
}

double vote(const WikiEsRule& rule, const ConceptGraph& graph, const DocumentProfile& profile) {
  if (rule.queries.empty()) throw Error("rule has no queries");
  double weight_sum = 0.0;
  double vote_sum = 0.0;
  for (const ScoredQuery& q : rule.queries) {
    weight_sum += q.fitness;
    if (eval_query(graph, q.tree, profile, rule.sensitivity)) vote_sum += q.fitness;
  }
  if (weight_sum == 0.0) return 0.0;
  return vote_sum / weight_sum;
}

bool classify(const WikiEsRule& rule, const ConceptGraph& graph, const DocumentProfile& profile) {
  return vote(rule, graph, profile) > 0.5;
}

namespace {

void format_at(const std::vector<QueryNode>& nodes, std::size_t& pos, std::string& out) {
  const QueryNode& n = nodes[pos++];
  if (n.kind == NodeKind::kTerminal) {
    out += 'w';
    out += std::to_string(n.terminal);
    return;
  }
  out += '(';
  out += op_name(n.kind);
  for (int i = 0; i < arity(n.kind); ++i) {
    out += ' ';
    format_at(nodes, pos, out);
  }
  out += ')';
}

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  QueryTree parse() {
    std::vector<QueryNode> nodes;
    parse_expr(nodes);
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return QueryTree::from_nodes(std::move(nodes));
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("query expression, position " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  void parse_expr(std::vector<QueryNode>& nodes) {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    if (text_[pos_] == '(') {
      ++pos_;
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view word = text_.substr(start, pos_ - start);
      NodeKind kind;
      if (word == "AND") kind = NodeKind::kAnd;
      else if (word == "OR") kind = NodeKind::kOr;
      else if (word == "NOT") kind = NodeKind::kNot;
      else { pos_ = start; fail("unknown operator '" + std::string(word) + "'"); }
      nodes.push_back({kind, 0});
      for (int i = 0; i < arity(kind); ++i) parse_expr(nodes);
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return;
    }
    if (text_[pos_] == 'w') {
      ++pos_;
      const char* begin = text_.data() + pos_;
      const char* end = text_.data() + text_.size();
      ConceptId id = 0;
      auto [ptr, ec] = std::from_chars(begin, end, id);
      if (ec != std::errc() || ptr == begin) fail("expected concept id after 'w'");
      pos_ += static_cast<std::size_t>(ptr - begin);
      nodes.push_back({NodeKind::kTerminal, id});
      return;
    }
    fail("expected '(' or terminal");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void check_rule(const WikiEsRule& rule) {
  if (rule.queries.empty()) throw Error("rule has no queries");
  rule.sensitivity.check();
  for (const ScoredQuery& q : rule.queries) {
    if (q.tree.empty()) throw Error("rule contains an empty query");
    if (!(q.fitness >= 0.0 && q.fitness <= 1.0))
      throw Error("query fitness must lie in [0, 1]");
  }
}

}  // namespace

std::string format_expression(const QueryTree& q) {
  if (q.empty()) throw Error("query tree is empty");
  std::string out;
  std::size_t pos = 0;
  format_at(q.nodes(), pos, out);
  return out;
}

QueryTree parse_expression(std::string_view text) { return ExpressionParser(text).parse(); }

std::string serialize_rule(const WikiEsRule& rule) {
  check_rule(rule);
  std::string out = "{\n";
  out += "  \"format\": \"wikies-rule/1\",\n";
  out += "  \"matcher\": \"";
  out += matcher_name(rule.sensitivity.matcher);
  out += "\",\n";
  out += "  \"c1\": " + fmt_double(rule.sensitivity.c1) + ",\n";
  out += "  \"c2\": " + fmt_double(rule.sensitivity.c2) + ",\n";
  out += "  \"terminal_set\": [";
  for (std::size_t i = 0; i < rule.terminal_set.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(rule.terminal_set[i]);
  }
  out += "],\n";
  if (!rule.token_vocab.empty()) {
    out += "  \"tokens\": [";
    for (std::size_t i = 0; i < rule.token_vocab.size(); ++i) {
      if (i > 0) out += ", ";
      out += "[" + std::to_string(rule.token_vocab[i].first) + ", \"" +
             escape_json(rule.token_vocab[i].second) + "\"]";
    }
    out += "],\n";
  }
  out += "  \"queries\": [\n";
  for (std::size_t i = 0; i < rule.queries.size(); ++i) {
    out += "    {\"expr\": \"" + escape_json(format_expression(rule.queries[i].tree)) +
           "\", \"fitness\": " + fmt_double(rule.queries[i].fitness) + "}";
    out += i + 1 < rule.queries.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

WikiEsRule parse_rule(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("rule file: ") + ex.what());
  }
  auto fail = [](const std::string& what) -> ParseError { return ParseError("rule file: " + what); };
  if (!j.is_object()) throw fail("expected a JSON object");
  if (!j.contains("format") || j.at("format") != "wikies-rule/1")
    throw fail("missing or unsupported 'format'");
  for (const char* field : {"matcher", "c1", "c2", "terminal_set", "queries"})
    if (!j.contains(field)) throw fail(std::string("missing field '") + field + "'");

  WikiEsRule rule;
  rule.sensitivity.matcher = matcher_from_name(j.at("matcher").get<std::string>());
  rule.sensitivity.c1 = j.at("c1").get<double>();
  rule.sensitivity.c2 = j.at("c2").get<double>();
  rule.terminal_set = j.at("terminal_set").get<std::vector<ConceptId>>();
  if (j.contains("tokens")) {
    for (const auto& entry : j.at("tokens")) {
      if (!entry.is_array() || entry.size() != 2)
        throw fail("'tokens' entries must be [id, token] pairs");
      rule.token_vocab.emplace_back(entry.at(0).get<ConceptId>(),
                                    entry.at(1).get<std::string>());
    }
  }
  if (!j.at("queries").is_array() || j.at("queries").empty())
    throw fail("'queries' must be a non-empty array");
  for (const auto& q : j.at("queries")) {
    if (!q.contains("expr") || !q.contains("fitness"))
      throw fail("each query needs 'expr' and 'fitness'");
    ScoredQuery sq;
    sq.tree = parse_expression(q.at("expr").get<std::string>());
    sq.fitness = q.at("fitness").get<double>();
    rule.queries.push_back(std::move(sq));
  }
  check_rule(rule);
  return rule;
}

void save_rule(const WikiEsRule& rule, const std::string& path) {
  write_file_atomic(path, serialize_rule(rule));
}

WikiEsRule load_rule(const std::string& path) { return parse_rule(read_file(path)); }

}  // namespace wikies
