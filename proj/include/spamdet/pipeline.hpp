#ifndef SPAMDET_PIPELINE_HPP
#define SPAMDET_PIPELINE_HPP

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "spamdet/classifier.hpp"
#include "spamdet/corpus.hpp"
#include "spamdet/evaluation.hpp"
#include "spamdet/features.hpp"

namespace spamdet {

// A stage failed because an upstream artifact is missing or invalid.
struct StageError : std::runtime_error {
  std::string stage;
  StageError(std::string stage_name, const std::string& msg)
      : std::runtime_error(stage_name + ": " + msg),
        stage(std::move(stage_name)) {}
};

struct RunConfig {
  // Input paths.
  std::string reviews_path;
  std::string products_path;
  std::string tasks_path;
  std::string lexicon_path;
  std::string phrases_path;
  // Optional externally supplied deceptive-reviewer list (one id per line);
  // when empty the cluster stage output is used.
  std::string deceptive_reviewers_path;
  std::vector<std::string> seed_reviewers;  // fixed deceptive seeds for EM

  FeatureConfig features;
  TrainOptions classifier;
  int truthful_ratio = 3;
  int kfold = 5;
  int em_max_iter = 50;

  // Evaluation settings.
  std::string curve_train_domain = "Electronics";
  std::vector<double> curve_fractions = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<std::string> train_reviewers;
  std::vector<std::string> test_reviewers;

  std::uint64_t seed = 0;
  std::string out_dir = "out";

  // Parses the JSON config file; reports all validation errors at once.
  static RunConfig load(const std::string& path);
};

// Pipeline stages. Each writes its artifacts plus a run manifest into
// config.out_dir and throws StageError when an upstream artifact is absent.
void cmd_ingest(const RunConfig& config);
void cmd_cluster(const RunConfig& config);
void cmd_sieve(const RunConfig& config);
void cmd_featurize(const RunConfig& config);
void cmd_train(const RunConfig& config);
void cmd_eval(const RunConfig& config, const std::string& protocol);

// Labeled-corpus persistence used between sieve and the later stages.
void save_labeled_corpus(const LabeledCorpus& corpus, const std::string& path,
                         const std::string& products_path);
LabeledCorpus load_labeled_corpus(const std::string& path,
                                  const std::string& products_path);

ProtocolConfig make_protocol_config(const RunConfig& config);

}  // namespace spamdet

#endif
