#include "spamdet/treebank.hpp"

#include <optional>

namespace spamdet {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

// Escaped-bracket and empty-element tags keep their leading dash.
bool keeps_dashes(const std::string& label) {
  return label == "-LRB-" || label == "-RRB-" || label == "-NONE-" ||
         label == "-LSB-" || label == "-RSB-" || label == "-LCB-" ||
         label == "-RCB-";
}

// Strip functional tag suffixes: "NP-SBJ" -> "NP", "S-TPC-1" -> "S".
std::string strip_label(const std::string& label) {
  if (keeps_dashes(label)) return label;
  auto pos = label.find('-');
  if (pos == std::string::npos || pos == 0) return label;
  return label.substr(0, pos);
}

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  void skip_space() {
    while (pos < text.size() && is_space(text[pos])) ++pos;
  }

  bool eof() const { return pos >= text.size(); }

  std::string read_atom() {
    std::size_t start = pos;
    while (pos < text.size() && !is_space(text[pos]) && text[pos] != '(' &&
           text[pos] != ')') {
      ++pos;
    }
    if (pos == start) throw TreeParseError("expected token", start);
    return text.substr(start, pos - start);
  }

  // Returns nullopt for subtrees erased by -NONE- removal.
  std::optional<ParseTree> parse_node() {
    skip_space();
    if (eof()) throw TreeParseError("unbalanced", pos);
    std::size_t open = pos;
    if (text[pos] != '(') {
      ParseTree leaf;
      leaf.token = read_atom();
      return leaf;
    }
    ++pos;  // consume '('
    skip_space();
    if (eof()) throw TreeParseError("unbalanced", pos);

    ParseTree node;
    if (text[pos] != '(' && text[pos] != ')') node.label = read_atom();

    bool saw_child = false;
    while (true) {
      skip_space();
      if (eof()) throw TreeParseError("unbalanced", pos);
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      saw_child = true;
      if (auto child = parse_node()) node.children.push_back(std::move(*child));
    }
    if (!saw_child) throw TreeParseError("empty node", open);

    if (strip_label(node.label) == "-NONE-") return std::nullopt;
    node.label = strip_label(node.label);
    if (node.children.empty()) return std::nullopt;  // all children erased
    return node;
  }
};

void collect_render(const ParseTree& t, std::string& out) {
  if (t.is_leaf()) {
    out += t.token;
    return;
  }
  out += '(';
  out += t.label;
  for (const auto& c : t.children) {
    out += ' ';
    collect_render(c, out);
  }
  out += ')';
}

void collect_tags(const ParseTree& t, std::vector<std::string>& out) {
  if (t.is_preterminal()) {
    out.push_back(t.label);
    return;
  }
  for (const auto& c : t.children) collect_tags(c, out);
}

void collect_tokens(const ParseTree& t, std::vector<std::string>& out) {
  if (t.is_leaf()) {
    out.push_back(t.token);
    return;
  }
  for (const auto& c : t.children) collect_tokens(c, out);
}

void collect_rules(const ParseTree& t, bool lexicalized,
                   std::vector<ProductionRule>& out) {
  if (t.is_leaf()) return;
  if (t.is_preterminal()) {
    if (lexicalized) {
      out.push_back({t.label, {t.children[0].token}, true});
    }
    return;
  }
  ProductionRule rule;
  rule.lhs = t.label;
  for (const auto& c : t.children) {
    rule.rhs.push_back(c.is_leaf() ? c.token : c.label);
  }
  out.push_back(std::move(rule));
  for (const auto& c : t.children) collect_rules(c, lexicalized, out);
}

}  // namespace

std::size_t ParseTree::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

std::size_t ParseTree::leaf_count() const {
  if (is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : children) n += c.leaf_count();
  return n;
}

std::size_t ParseTree::internal_count() const {
  if (is_leaf()) return 0;
  std::size_t n = 1;
  for (const auto& c : children) n += c.internal_count();
  return n;
}

std::size_t ParseTree::preterminal_count() const {
  if (is_leaf()) return 0;
  if (is_preterminal()) return 1;
  std::size_t n = 0;
  for (const auto& c : children) n += c.preterminal_count();
  return n;
}

std::string ProductionRule::to_string() const {
  std::string s = lhs + " ->";
  for (const auto& r : rhs) {
    s += ' ';
    s += r;
  }
  return s;
}

ParseTree parse_bracketed(const std::string& text) {
  Parser p(text);
  p.skip_space();
  if (p.eof()) throw TreeParseError("empty input", 0);
  if (p.text[p.pos] != '(')
    throw TreeParseError("bare top-level token", p.pos);
  auto root = p.parse_node();
  p.skip_space();
  if (!p.eof()) throw TreeParseError("trailing input", p.pos);
  if (!root) throw TreeParseError("tree erased by -NONE- removal", 0);
  if (root->is_leaf()) throw TreeParseError("bare top-level token", 0);

  // Unwrap ROOT/TOP or unlabeled wrapper around a single tree.
  while (!root->is_leaf() && root->children.size() == 1 &&
         !root->children[0].is_leaf() &&
         (root->label.empty() || root->label == "ROOT" ||
          root->label == "TOP")) {
    ParseTree inner = std::move(root->children[0]);
    *root = std::move(inner);
  }
  return *root;
}

std::string render_bracketed(const ParseTree& tree) {
  std::string out;
  collect_render(tree, out);
  return out;
}

std::vector<std::string> pos_tags(const ParseTree& tree) {
  std::vector<std::string> out;
  collect_tags(tree, out);
  return out;
}

std::vector<std::string> tree_tokens(const ParseTree& tree) {
  std::vector<std::string> out;
  collect_tokens(tree, out);
  return out;
}

std::vector<ProductionRule> production_rules(const ParseTree& tree,
                                             bool lexicalized) {
  std::vector<ProductionRule> out;
  collect_rules(tree, lexicalized, out);
  return out;
}

}  // namespace spamdet
