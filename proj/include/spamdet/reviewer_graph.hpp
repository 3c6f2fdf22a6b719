#ifndef SPAMDET_REVIEWER_GRAPH_HPP
#define SPAMDET_REVIEWER_GRAPH_HPP

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spamdet/corpus.hpp"

namespace spamdet {

// Behavioral feature dimensions, all in [0,1].
inline constexpr std::size_t kBehaviorDims = 4;
enum BehaviorDim {
  kFractionVerified = 0,
  kFractionFiveStar = 1,
  kMaxReviewsPerDay = 2,  // capped at 10, divided by 10
  kRootTaskFraction = 3
};
// Cap applied to the per-day review count before normalization.
inline constexpr double kReviewsPerDayCap = 10.0;

struct ReviewerNode {
  std::string reviewer_id;
  std::array<double, kBehaviorDims> behavior{};
  std::optional<bool> seed_deceptive;  // fixed label when set
};

struct GraphEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  double collab_count = 0;  // shared root-task products both reviewed
  double similarity = 0;    // 1 - L1(behavior_i, behavior_j) / dims
};

struct ReviewerGraph {
  std::vector<ReviewerNode> nodes;
  std::vector<GraphEdge> edges;
  // node index -> (neighbor index, edge index)
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency;
  std::map<std::string, std::size_t> index_of;
};

struct MRFParams {
  std::array<double, kBehaviorDims> w{};
  double bias = 0.0;
  double lambda = 1.0;  // edge coupling, >= 0
  double mu = 1.0;      // similarity mixing, >= 0
};

// label true = deceptive; total over graph nodes.
using Assignment = std::vector<bool>;

// One node per reviewer; edge (i,j) iff the pair shares at least one
// root-task product. Reviewers in seed_deceptive get a fixed deceptive
// label.
ReviewerGraph build_graph(const std::vector<Review>& reviews,
                          const TaskSet& tasks,
                          const std::set<std::string>& seed_deceptive = {});

double node_potential(const ReviewerNode& node, const MRFParams& params);
double edge_weight(const GraphEdge& edge, const MRFParams& params);

// Unnormalized log-score: sum of node potentials over deceptive nodes plus
// edge weights over same-label pairs. Higher is better.
double energy(const ReviewerGraph& graph, const Assignment& assignment,
              const MRFParams& params);

// Exact global maximizer of energy subject to seed labels, by reduction to
// minimum s-t cut; requires lambda >= 0. Ties break toward authentic.
Assignment map_assignment(const ReviewerGraph& graph, const MRFParams& params);

// Exhaustive-enumeration maximizer; test oracle for graphs <= 20 nodes.
Assignment brute_force_assignment(const ReviewerGraph& graph,
                                  const MRFParams& params);

// Pseudo-log-likelihood of the assignment and its gradient with respect to
// (w[0..3], bias, lambda, mu), in that order.
double pseudo_loglik_and_grad(const ReviewerGraph& graph,
                              const Assignment& assignment,
                              const MRFParams& params,
                              std::array<double, kBehaviorDims + 3>& grad);

struct MStepResult {
  MRFParams params;
  bool converged = false;
  int iterations = 0;
};

struct MStepOptions {
  int max_iter = 500;
  double tol = 1e-6;
  double step = 0.1;
};

// Projected gradient ascent on the pseudo-log-likelihood; lambda and mu
// clamped >= 0. Returns the best iterate with converged=false on
// non-convergence.
MStepResult update_params(const ReviewerGraph& graph,
                          const Assignment& assignment,
                          const MRFParams& init = {},
                          const MStepOptions& opts = {});

struct EmResult {
  Assignment assignment;
  MRFParams params;
  std::vector<double> energy_trace;  // energy after each E-step
  int iterations = 0;
  bool m_step_warning = false;
};

// Hard EM: alternates exact MAP E-steps with pseudo-likelihood M-steps
// until the assignment is a fixed point or max_iter is reached.
EmResult em_cluster(const ReviewerGraph& graph, const MRFParams& init = {},
                    int max_iter = 50);

// Reviewer ids labeled deceptive under the assignment.
std::set<std::string> deceptive_reviewers(const ReviewerGraph& graph,
                                          const Assignment& assignment);

// Edge list "i j c s" plus a node table; assignment as two-column text.
std::string dump_graph(const ReviewerGraph& graph);
std::string dump_assignment(const ReviewerGraph& graph,
                            const Assignment& assignment);

}  // namespace spamdet

#endif
