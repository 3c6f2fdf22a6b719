#ifndef SPAMDET_TREEBANK_HPP
#define SPAMDET_TREEBANK_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spamdet {

// Node of a bracketed constituency tree. A node carries either children
// (internal node, `label` is the nonterminal/preterminal tag) or a token
// (leaf word, `label` empty).
struct ParseTree {
  std::string label;
  std::vector<ParseTree> children;
  std::string token;

  bool is_leaf() const { return children.empty(); }
  // Preterminal: single child which is a word leaf.
  bool is_preterminal() const {
    return children.size() == 1 && children[0].is_leaf();
  }

  std::size_t node_count() const;
  std::size_t leaf_count() const;
  std::size_t internal_count() const;
  std::size_t preterminal_count() const;
};

struct TreeParseError : std::runtime_error {
  std::size_t offset;
  TreeParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)),
        offset(off) {}
};

// CFG rewrite extracted from one internal node. For preterminals the rhs is
// the single terminal word.
struct ProductionRule {
  std::string lhs;
  std::vector<std::string> rhs;
  bool lexical = false;  // preterminal -> word

  bool operator==(const ProductionRule&) const = default;
  bool operator<(const ProductionRule& o) const {
    if (lhs != o.lhs) return lhs < o.lhs;
    if (rhs != o.rhs) return rhs < o.rhs;
    return lexical < o.lexical;
  }
  std::string to_string() const;
};

// Parses one Penn-Treebank style bracketed tree. An outer ROOT wrapper (or
// unlabeled "( ... )" wrapper) is stripped. Functional tag suffixes are
// stripped from labels; -NONE- empty elements are dropped with their
// dominated structure. Throws TreeParseError on malformed input.
ParseTree parse_bracketed(const std::string& text);

// Canonical single-space bracketed form; parse(render(t)) == t.
std::string render_bracketed(const ParseTree& tree);

// Preterminal labels in left-to-right token order.
std::vector<std::string> pos_tags(const ParseTree& tree);

// Tokens in left-to-right order.
std::vector<std::string> tree_tokens(const ParseTree& tree);

// One rule per internal node. lexicalized=false drops preterminal->word
// rules (UP mode); lexicalized=true keeps everything (AP mode).
std::vector<ProductionRule> production_rules(const ParseTree& tree,
                                             bool lexicalized);

}  // namespace spamdet

#endif
