#ifndef SPAMDET_CLASSIFIER_HPP
#define SPAMDET_CLASSIFIER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "spamdet/features.hpp"

namespace spamdet {

struct TrainExample {
  std::vector<std::pair<std::size_t, double>> features;  // sparse, sorted
  bool deceptive = false;
};

struct MaxentModel {
  std::vector<double> weights;
  double bias = 0.0;
  double C = 1.0;  // inverse regularization strength; infinity disables L2
  int iterations = 0;
  double final_grad_norm = 0.0;
  bool converged = false;
  std::uint64_t feature_space_hash = 0;
};

// Negative log-likelihood plus L2 penalty (bias unregularized):
//   sum_i log(1 + exp(-y_i * (w.x_i + b))) + ||w||^2 / (2C)
// Gradient returned as weights gradient followed by the bias component.
double nll_and_grad(const std::vector<double>& weights, double bias, double C,
                    std::size_t dim, const std::vector<TrainExample>& data,
                    std::vector<double>& grad_weights, double& grad_bias);

struct TrainOptions {
  double C = 1.0;
  double tol = 1e-6;
  int max_iter = 1000;
};

// Deterministic L-BFGS from zero initialization. Throws on single-class
// data or a non-finite objective.
MaxentModel train(const std::vector<TrainExample>& data, std::size_t dim,
                  const TrainOptions& opts = {});

double predict_proba(const MaxentModel& model,
                     const std::vector<std::pair<std::size_t, double>>& x);

// Deceptive iff probability >= threshold.
bool predict(const MaxentModel& model,
             const std::vector<std::pair<std::size_t, double>>& x,
             double threshold = 0.5);

// Versioned text persistence; loading verifies the feature-space hash when
// one is supplied.
std::string model_to_text(const MaxentModel& model, const FeatureSpace* space);
MaxentModel model_from_text(const std::string& text,
                            const FeatureSpace* space);

}  // namespace spamdet

#endif
