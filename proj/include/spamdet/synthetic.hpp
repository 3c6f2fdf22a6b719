#ifndef SPAMDET_SYNTHETIC_HPP
#define SPAMDET_SYNTHETIC_HPP

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "spamdet/corpus.hpp"
#include "spamdet/features.hpp"

namespace spamdet {

// Generation parameters for a corpus with planted style contrasts between
// deceptive and authentic reviews.
struct SyntheticSpec {
  // Deceptive review count per domain; authentic = authentic_per_deceptive x.
  std::map<Domain, std::size_t> deceptive_per_domain = {
      {Domain::Books, 150},
      {Domain::Health, 100},
      {Domain::Electronics, 50},
      {Domain::Movies, 50},
      {Domain::Other, 150}};
  int authentic_per_deceptive = 3;

  double ad_phrase_rate_deceptive = 0.6;
  double ad_phrase_rate_authentic = 0.1;
  // Target mean tokens per sentence.
  double sentence_len_deceptive = 12;
  double sentence_len_authentic = 20;
  // Probability a review echoes the product title.
  double title_echo_deceptive = 0.7;
  double title_echo_authentic = 0.15;

  int sentences_per_review = 4;
  std::size_t products_per_domain = 8;
};

// Deterministic given (spec, phrases, seed). Every generated review carries
// parse trees consistent with its body text.
LabeledCorpus generate_synthetic_corpus(const SyntheticSpec& spec,
                                        const AdPhraseList& phrases,
                                        std::uint64_t seed);

// Random well-formed tree for round-trip and oracle tests.
ParseTree random_tree(std::mt19937_64& rng, int max_depth = 4,
                      int max_children = 4);

}  // namespace spamdet

#endif
