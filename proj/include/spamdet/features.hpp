#ifndef SPAMDET_FEATURES_HPP
#define SPAMDET_FEATURES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spamdet/corpus.hpp"
#include "spamdet/treebank.hpp"

namespace spamdet {

enum class Family {
  Unigram,
  Pos,
  Lexicon,
  ApRules,
  UpRules,
  AdPhrases,
  TitleOverlap,
  Complexity
};

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);
// Fixed assembly order of all families.
const std::vector<Family>& all_families();

// Semantic word classes; a trailing '*' on an entry means prefix match.
struct CategoryLexicon {
  struct Category {
    std::string name;
    std::vector<std::string> exact;     // full-token entries
    std::vector<std::string> prefixes;  // entries ending in '*', '*' removed
  };
  std::vector<Category> categories;

  static CategoryLexicon load(const std::string& path);
  static CategoryLexicon parse(const std::string& text);
  std::string serialize() const;
};

struct AdPhraseList {
  // Each phrase pre-tokenized, 1-4 tokens, unique.
  std::vector<std::vector<std::string>> phrases;
  std::vector<std::string> raw;  // original lower-cased phrase strings

  static AdPhraseList load(const std::string& path);
  static AdPhraseList parse(const std::string& text);
  std::string serialize() const;
};

struct FeatureConfig {
  std::set<Family> families;
  int min_df = 2;
};

struct FeatureVector {
  std::vector<std::pair<std::size_t, double>> values;  // strictly increasing
  std::optional<Label> label;

  void push(std::size_t index, double value) {
    if (value != 0.0) values.emplace_back(index, value);
  }
};

// Named, versioned feature space: per-family vocabularies plus the lexicon
// and phrase-list data they were built with.
class FeatureSpace {
 public:
  static FeatureSpace build(const std::vector<LabeledReview>& training,
                            const FeatureConfig& config,
                            const CategoryLexicon& lexicon,
                            const AdPhraseList& phrases);

  const FeatureConfig& config() const { return config_; }
  std::size_t dim() const { return dim_; }
  std::size_t family_offset(Family f) const;
  std::size_t family_size(Family f) const;
  const std::vector<std::string>& vocab(Family f) const;
  const std::string& dimension_name(std::size_t index) const;
  const CategoryLexicon& lexicon() const { return lexicon_; }
  const AdPhraseList& phrases() const { return phrases_; }

  std::string manifest() const;
  static FeatureSpace from_manifest(const std::string& text);
  std::uint64_t content_hash() const;

 private:
  void finalize();

  FeatureConfig config_;
  std::map<Family, std::vector<std::string>> vocabs_;
  CategoryLexicon lexicon_;
  AdPhraseList phrases_;
  std::map<Family, std::size_t> offsets_;
  std::vector<std::string> names_;
  std::size_t dim_ = 0;
};

// Lower-cased Unicode-aware tokenization; internal apostrophes and hyphens
// stay inside tokens.
std::vector<std::string> tokenize(const std::string& text);

// Tokens of title + body.
std::vector<std::string> review_tokens(const Review& review);

// Document-frequency vocabulary over the training corpus: items present in
// >= min_df documents, lexicographically ordered. Families: Unigram,
// ApRules, UpRules. Throws if the result is empty.
std::vector<std::string> build_vocab(const std::vector<LabeledReview>& corpus,
                                     Family family, int min_df);

// Penn Treebank POS tag inventory used by the pos family.
const std::vector<std::string>& pos_tag_set();

// Per-family extractors; values are relative frequencies unless noted.
std::vector<std::pair<std::size_t, double>> unigram_features(
    const Review& review, const std::vector<std::string>& vocab);
std::vector<std::pair<std::size_t, double>> pos_features(
    const std::vector<ParseTree>& trees);
std::vector<std::pair<std::size_t, double>> lexicon_features(
    const Review& review, const CategoryLexicon& lexicon);
std::vector<std::pair<std::size_t, double>> production_features(
    const std::vector<ParseTree>& trees, bool lexicalized,
    const std::vector<std::string>& vocab);
// Binary presence of each phrase as a contiguous token subsequence.
std::vector<std::pair<std::size_t, double>> ad_phrase_features(
    const Review& review, const AdPhraseList& phrases);
// Distinct shared unigram and bigram type counts (raw counts).
std::pair<double, double> title_overlap_features(const Review& review,
                                                 const Product& product);

// Full vector over the enabled families, in fixed family order.
FeatureVector assemble(const Review& review, const Product* product,
                       const FeatureSpace& space);

std::vector<ParseTree> parse_sentences(const Review& review);

}  // namespace spamdet

#endif
