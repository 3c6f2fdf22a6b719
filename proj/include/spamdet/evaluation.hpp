#ifndef SPAMDET_EVALUATION_HPP
#define SPAMDET_EVALUATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "spamdet/classifier.hpp"
#include "spamdet/corpus.hpp"
#include "spamdet/features.hpp"

namespace spamdet {

// Deceptive-class metrics, stored in [0,1].
struct Triple {
  double recall = 0;
  double precision = 0;
  double f1 = 0;
};

// Standard deceptive-class definitions; precision 0 with no positive
// predictions, f1 0 when recall and precision are both 0.
Triple prf(const std::vector<bool>& predictions,
           const std::vector<bool>& gold);

// Component-wise arithmetic mean.
Triple macro_average(const std::vector<Triple>& triples);

struct EvalReport {
  struct Run {
    std::string name;  // train domain, fold id, or transfer direction
    std::vector<std::pair<std::string, Triple>> per_test;  // test scope
    Triple macro;
  };
  std::string protocol;
  std::vector<std::string> families;
  std::uint64_t seed = 0;
  std::string train_scope;
  bool augmented = false;
  std::vector<Run> runs;
  Triple meta_macro;

  std::string to_text() const;
  std::string to_csv() const;
  std::string to_json() const;  // machine-readable run manifest body
};

struct ProtocolConfig {
  FeatureConfig features;
  CategoryLexicon lexicon;
  AdPhraseList phrases;
  TrainOptions classifier;
  int truthful_ratio = 3;
};

// Seeded stratified k-fold over the 1:3 sampled domain corpus;
// vocabularies rebuilt per fold from training folds only.
EvalReport kfold_indomain(const LabeledCorpus& corpus, Domain domain, int k,
                          const ProtocolConfig& config, std::uint64_t seed);

// Four runs: train on one core domain (optionally augmented with the Other
// pool), test on the remaining three. Meta-macro over the four runs.
EvalReport cross_domain(const LabeledCorpus& corpus,
                        const ProtocolConfig& config, bool augment_with_other,
                        std::uint64_t seed);

struct CurvePoint {
  std::size_t added_deceptive = 0;
  double fraction = 0;
  double macro_f1 = 0;
};

// Retrains with growing prefixes of the shuffled Other pool added to the
// train domain; macro-F1 over the three test domains per point.
std::vector<CurvePoint> learning_curve(const LabeledCorpus& corpus,
                                       Domain train_domain,
                                       const std::vector<double>& fractions,
                                       const ProtocolConfig& config,
                                       std::uint64_t seed);

std::string curve_to_csv(const std::vector<CurvePoint>& points);

// Trains on the train reviewers' deceptive reviews plus a 3x authentic
// sample; tests on the test reviewers' deceptive reviews plus a disjoint
// 3x authentic sample. Throws when the reviewer sets overlap.
EvalReport reviewer_transfer(const LabeledCorpus& corpus,
                             const std::set<std::string>& train_reviewers,
                             const std::set<std::string>& test_reviewers,
                             const ProtocolConfig& config, std::uint64_t seed);

}  // namespace spamdet

#endif
