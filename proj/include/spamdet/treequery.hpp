#ifndef SPAMDET_TREEQUERY_HPP
#define SPAMDET_TREEQUERY_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "spamdet/treebank.hpp"

namespace spamdet {

struct PatternSyntaxError : std::runtime_error {
  std::size_t offset;
  PatternSyntaxError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " at offset " + std::to_string(off)),
        offset(off) {}
};

// Compiled tree pattern. Grammar:
//   pattern  := head relation*
//   head     := atom | '(' pattern ')'
//   atom     := '__' | label ('|' label)*
//   relation := ('<' | '<<' | '!<' | '!<<') head
// '<' is immediate dominance, '<<' is dominance; '!' negates the relation.
// Multiple relations on one head conjoin. Compiled patterns are immutable
// and reusable across trees.
class TreePattern {
 public:
  static TreePattern compile(const std::string& text);

  // Number of distinct nodes of `tree` satisfying the pattern.
  std::size_t match_count(const ParseTree& tree) const;

  // Whether a specific node satisfies the pattern.
  bool matches(const ParseTree& node) const;

  struct Node;  // compiled representation

 private:
  std::shared_ptr<const Node> root_;
};

TreePattern compile_pattern(const std::string& text);
std::size_t match_count(const ParseTree& tree, const TreePattern& pattern);

// Syntactic complexity counts and ratios for one review's sentence trees.
// Ratios with a zero denominator are defined as 0.
struct ComplexityVector {
  double words = 0;               // leaves under non-punctuation tags
  double sentences = 0;           // one per input tree
  double clauses = 0;             // S|SINV|SQ|SBARQ immediately dominating VP
  double dependent_clauses = 0;   // clause whose parent is SBAR
  double t_units = 0;             // clause with no clause ancestor
  double coordinate_phrases = 0;  // NP|VP|ADJP|ADVP immediately dominating CC
  double verb_phrases = 0;        // nodes labeled VP

  double mean_len_sentence() const;   // W/S
  double mean_len_clause() const;     // W/C
  double clauses_per_sentence() const;
  double clauses_per_t_unit() const;
  double dep_clauses_per_clause() const;
  double dep_clauses_per_t_unit() const;
  double coord_per_clause() const;
  double coord_per_t_unit() const;
  double vps_per_t_unit() const;
  double t_units_per_sentence() const;

  // The ten ratios above, in declaration order.
  std::vector<double> ratios() const;
  static const std::vector<std::string>& ratio_names();
};

ComplexityVector complexity_profile(const std::vector<ParseTree>& trees);

// Tags treated as punctuation for word counting.
bool is_punctuation_tag(const std::string& tag);

}  // namespace spamdet

#endif
