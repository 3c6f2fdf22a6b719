#include "spamdet/treequery.hpp"

#include <algorithm>
#include <array>

namespace spamdet {

struct TreePattern::Node {
  bool wildcard = false;
  std::vector<std::string> labels;
  struct Rel {
    bool immediate = true;
    bool negated = false;
    std::shared_ptr<const Node> target;
  };
  std::vector<Rel> relations;
};

namespace {

using PNode = TreePattern::Node;

struct PatternParser {
  const std::string& text;
  std::size_t pos = 0;

  explicit PatternParser(const std::string& t) : text(t) {}

  void skip_space() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool eof() {
    skip_space();
    return pos >= text.size();
  }

  char peek() { return text[pos]; }

  bool label_char(char c) {
    return c != ' ' && c != '\t' && c != '(' && c != ')' && c != '<' &&
           c != '|' && c != '!';
  }

  std::string read_label() {
    std::size_t start = pos;
    while (pos < text.size() && label_char(text[pos])) ++pos;
    if (pos == start) throw PatternSyntaxError("expected label", start);
    return text.substr(start, pos - start);
  }

  std::shared_ptr<PNode> parse_atom() {
    skip_space();
    if (pos >= text.size()) throw PatternSyntaxError("expected atom", pos);
    auto node = std::make_shared<PNode>();
    node->labels.push_back(read_label());
    while (pos < text.size() && text[pos] == '|') {
      ++pos;
      node->labels.push_back(read_label());
    }
    if (node->labels.size() == 1 && node->labels[0] == "__") {
      node->wildcard = true;
      node->labels.clear();
    }
    return node;
  }

  // head := atom | '(' pattern ')'
  std::shared_ptr<PNode> parse_head() {
    skip_space();
    if (pos >= text.size()) throw PatternSyntaxError("expected pattern", pos);
    if (text[pos] == '(') {
      ++pos;
      auto node = parse_pattern();
      skip_space();
      if (pos >= text.size() || text[pos] != ')')
        throw PatternSyntaxError("expected ')'", pos);
      ++pos;
      return node;
    }
    return parse_atom();
  }

  std::shared_ptr<PNode> parse_pattern() {
    auto head = parse_head();
    while (true) {
      skip_space();
      if (pos >= text.size() || text[pos] == ')') break;
      PNode::Rel rel;
      if (text[pos] == '!') {
        rel.negated = true;
        ++pos;
      }
      if (pos >= text.size() || text[pos] != '<')
        throw PatternSyntaxError("unknown relation operator", pos);
      ++pos;
      if (pos < text.size() && text[pos] == '<') {
        rel.immediate = false;
        ++pos;
      }
      rel.target = parse_head();
      head->relations.push_back(std::move(rel));
    }
    return head;
  }
};

bool node_matches(const ParseTree& t, const PNode& p);

bool any_child(const ParseTree& t, const PNode& p) {
  return std::any_of(t.children.begin(), t.children.end(),
                     [&](const ParseTree& c) { return node_matches(c, p); });
}

bool any_descendant(const ParseTree& t, const PNode& p) {
  for (const auto& c : t.children) {
    if (node_matches(c, p) || any_descendant(c, p)) return true;
  }
  return false;
}

bool node_matches(const ParseTree& t, const PNode& p) {
  if (!p.wildcard) {
    const std::string& name = t.is_leaf() ? t.token : t.label;
    if (std::find(p.labels.begin(), p.labels.end(), name) == p.labels.end())
      return false;
  }
  for (const auto& rel : p.relations) {
    bool found = rel.immediate ? any_child(t, *rel.target)
                               : any_descendant(t, *rel.target);
    if (found == rel.negated) return false;
  }
  return true;
}

std::size_t count_matches(const ParseTree& t, const PNode& p) {
  std::size_t n = node_matches(t, p) ? 1 : 0;
  for (const auto& c : t.children) n += count_matches(c, p);
  return n;
}

bool label_in(const std::string& label,
              std::initializer_list<const char*> set) {
  return std::any_of(set.begin(), set.end(),
                     [&](const char* s) { return label == s; });
}

bool is_clause(const ParseTree& t) {
  if (t.is_leaf() || !label_in(t.label, {"S", "SINV", "SQ", "SBARQ"}))
    return false;
  return std::any_of(t.children.begin(), t.children.end(),
                     [](const ParseTree& c) {
                       return !c.is_leaf() && c.label == "VP";
                     });
}

void walk_counts(const ParseTree& t, const std::string& parent_label,
                 bool under_clause, ComplexityVector& v) {
  if (t.is_leaf()) {
    if (!is_punctuation_tag(parent_label)) v.words += 1;
    return;
  }
  bool clause = is_clause(t);
  if (clause) {
    v.clauses += 1;
    if (parent_label == "SBAR") v.dependent_clauses += 1;
    if (!under_clause) v.t_units += 1;
  }
  if (t.label == "VP") v.verb_phrases += 1;
  if (label_in(t.label, {"NP", "VP", "ADJP", "ADVP"})) {
    bool has_cc = std::any_of(t.children.begin(), t.children.end(),
                              [](const ParseTree& c) {
                                return !c.is_leaf() && c.label == "CC";
                              });
    if (has_cc) v.coordinate_phrases += 1;
  }
  for (const auto& c : t.children) {
    walk_counts(c, t.label, under_clause || clause, v);
  }
}

double ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }

}  // namespace

TreePattern TreePattern::compile(const std::string& text) {
  PatternParser p(text);
  if (p.eof()) throw PatternSyntaxError("empty pattern", 0);
  auto root = p.parse_pattern();
  p.skip_space();
  if (p.pos < text.size())
    throw PatternSyntaxError("trailing input", p.pos);
  TreePattern pat;
  pat.root_ = std::move(root);
  return pat;
}

std::size_t TreePattern::match_count(const ParseTree& tree) const {
  return count_matches(tree, *root_);
}

bool TreePattern::matches(const ParseTree& node) const {
  return node_matches(node, *root_);
}

TreePattern compile_pattern(const std::string& text) {
  return TreePattern::compile(text);
}

std::size_t match_count(const ParseTree& tree, const TreePattern& pattern) {
  return pattern.match_count(tree);
}

bool is_punctuation_tag(const std::string& tag) {
  static const std::array<const char*, 9> punct = {
      ".", ",", ":", "''", "``", "-LRB-", "-RRB-", "#", "$"};
  return std::any_of(punct.begin(), punct.end(),
                     [&](const char* s) { return tag == s; });
}

double ComplexityVector::mean_len_sentence() const {
  return ratio(words, sentences);
}
double ComplexityVector::mean_len_clause() const {
  return ratio(words, clauses);
}
double ComplexityVector::clauses_per_sentence() const {
  return ratio(clauses, sentences);
}
double ComplexityVector::clauses_per_t_unit() const {
  return ratio(clauses, t_units);
}
double ComplexityVector::dep_clauses_per_clause() const {
  return ratio(dependent_clauses, clauses);
}
double ComplexityVector::dep_clauses_per_t_unit() const {
  return ratio(dependent_clauses, t_units);
}
double ComplexityVector::coord_per_clause() const {
  return ratio(coordinate_phrases, clauses);
}
double ComplexityVector::coord_per_t_unit() const {
  return ratio(coordinate_phrases, t_units);
}
double ComplexityVector::vps_per_t_unit() const {
  return ratio(verb_phrases, t_units);
}
double ComplexityVector::t_units_per_sentence() const {
  return ratio(t_units, sentences);
}

std::vector<double> ComplexityVector::ratios() const {
  return {mean_len_sentence(),      mean_len_clause(),
          clauses_per_sentence(),   clauses_per_t_unit(),
          dep_clauses_per_clause(), dep_clauses_per_t_unit(),
          coord_per_clause(),       coord_per_t_unit(),
          vps_per_t_unit(),         t_units_per_sentence()};
}

const std::vector<std::string>& ComplexityVector::ratio_names() {
  static const std::vector<std::string> names = {
      "MLS",  "MLC",  "C_per_S",  "C_per_T",  "DC_per_C",
      "DC_per_T", "CP_per_C", "CP_per_T", "VP_per_T", "T_per_S"};
  return names;
}

ComplexityVector complexity_profile(const std::vector<ParseTree>& trees) {
  ComplexityVector v;
  for (const auto& t : trees) {
    v.sentences += 1;
    walk_counts(t, "", false, v);
  }
  return v;
}

}  // namespace spamdet
