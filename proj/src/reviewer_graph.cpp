#include "spamdet/reviewer_graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spamdet/mincut.hpp"

namespace spamdet {

namespace {

double sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z))
                : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

ReviewerGraph build_graph(const std::vector<Review>& reviews,
                          const TaskSet& tasks,
                          const std::set<std::string>& seed_deceptive) {
  ReviewerGraph graph;

  // Group reviews per reviewer (order of first appearance, then sorted ids
  // for deterministic node order).
  std::map<std::string, std::vector<const Review*>> per_reviewer;
  for (const auto& r : reviews) per_reviewer[r.reviewer_id].push_back(&r);

  for (const auto& [reviewer_id, revs] : per_reviewer) {
    ReviewerNode node;
    node.reviewer_id = reviewer_id;
    double verified = 0, five_star = 0, on_root_task = 0;
    std::map<std::string, int> per_day;
    std::set<std::string> products;
    for (const Review* r : revs) {
      if (r->verified_purchase) verified += 1;
      if (r->rating == 5) five_star += 1;
      if (!r->posted_at.empty()) per_day[r->posted_at]++;
      products.insert(r->product_id);
    }
    for (const auto& p : products) {
      if (tasks.root_products.count(p)) on_root_task += 1;
    }
    double n = double(revs.size());
    int max_per_day = 0;
    for (const auto& [day, count] : per_day)
      max_per_day = std::max(max_per_day, count);
    node.behavior[kFractionVerified] = verified / n;
    node.behavior[kFractionFiveStar] = five_star / n;
    node.behavior[kMaxReviewsPerDay] =
        std::min(double(max_per_day), kReviewsPerDayCap) / kReviewsPerDayCap;
    node.behavior[kRootTaskFraction] =
        products.empty() ? 0.0 : on_root_task / double(products.size());
    if (seed_deceptive.count(reviewer_id)) node.seed_deceptive = true;
    graph.index_of[reviewer_id] = graph.nodes.size();
    graph.nodes.push_back(std::move(node));
  }

  // Collaboration counts: reviewers sharing reviewed root-task products.
  std::map<std::string, std::vector<std::size_t>> root_product_reviewers;
  for (const auto& r : reviews) {
    if (tasks.root_products.count(r.product_id))
      root_product_reviewers[r.product_id].push_back(
          graph.index_of.at(r.reviewer_id));
  }
  std::map<std::pair<std::size_t, std::size_t>, double> collab;
  for (auto& [product, members] : root_product_reviewers) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        collab[{members[a], members[b]}] += 1;
      }
    }
  }

  graph.adjacency.resize(graph.nodes.size());
  for (const auto& [pair, count] : collab) {
    auto [i, j] = pair;
    GraphEdge e;
    e.i = i;
    e.j = j;
    e.collab_count = count;
    double l1 = 0;
    for (std::size_t d = 0; d < kBehaviorDims; ++d)
      l1 += std::abs(graph.nodes[i].behavior[d] - graph.nodes[j].behavior[d]);
    e.similarity = 1.0 - l1 / double(kBehaviorDims);
    std::size_t edge_idx = graph.edges.size();
    graph.adjacency[i].emplace_back(j, edge_idx);
    graph.adjacency[j].emplace_back(i, edge_idx);
    graph.edges.push_back(e);
  }
  return graph;
}

double node_potential(const ReviewerNode& node, const MRFParams& params) {
  double theta = params.bias;
  for (std::size_t d = 0; d < kBehaviorDims; ++d)
    theta += params.w[d] * node.behavior[d];
  return theta;
}

double edge_weight(const GraphEdge& edge, const MRFParams& params) {
  return params.lambda * (edge.collab_count + params.mu * edge.similarity);
}

double energy(const ReviewerGraph& graph, const Assignment& assignment,
              const MRFParams& params) {
  if (assignment.size() != graph.nodes.size())
    throw std::runtime_error("assignment not total over graph nodes");
  double e = 0;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (assignment[i]) e += node_potential(graph.nodes[i], params);
  }
  for (const auto& edge : graph.edges) {
    if (assignment[edge.i] == assignment[edge.j]) e += edge_weight(edge, params);
  }
  return e;
}

Assignment map_assignment(const ReviewerGraph& graph,
                          const MRFParams& params) {
  if (params.lambda < 0)
    throw std::runtime_error(
        "negative lambda: energy is not submodular, exact solver invalid");
  const std::size_t n = graph.nodes.size();
  Assignment assignment(n, false);
  if (n == 0) return assignment;

  // Min-cut over cost(y) = -energy(y) + const. Label deceptive = source
  // side. Unary: cost 0 for authentic, -theta for deceptive; pairwise:
  // edge weight paid when labels differ.
  const std::size_t source = n, sink = n + 1;
  double seed_cap = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    seed_cap += std::abs(node_potential(graph.nodes[i], params));
  for (const auto& edge : graph.edges) seed_cap += edge_weight(edge, params);

  MaxFlow flow(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = graph.nodes[i];
    if (node.seed_deceptive.has_value()) {
      if (*node.seed_deceptive) flow.add_arc(source, i, seed_cap);
      else flow.add_arc(i, sink, seed_cap);
      continue;
    }
    double theta = node_potential(node, params);
    if (theta > 0) flow.add_arc(source, i, theta);
    else if (theta < 0) flow.add_arc(i, sink, -theta);
  }
  for (const auto& edge : graph.edges) {
    flow.add_undirected(edge.i, edge.j, edge_weight(edge, params));
  }
  flow.solve(source, sink);
  for (std::size_t i = 0; i < n; ++i) assignment[i] = flow.source_side(i);
  for (std::size_t i = 0; i < n; ++i) {
    if (graph.nodes[i].seed_deceptive.has_value())
      assignment[i] = *graph.nodes[i].seed_deceptive;
  }
  return assignment;
}

Assignment brute_force_assignment(const ReviewerGraph& graph,
                                  const MRFParams& params) {
  const std::size_t n = graph.nodes.size();
  std::vector<std::size_t> free_nodes;
  Assignment assignment(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (graph.nodes[i].seed_deceptive.has_value())
      assignment[i] = *graph.nodes[i].seed_deceptive;
    else
      free_nodes.push_back(i);
  }
  if (free_nodes.size() > 25)
    throw std::runtime_error("brute force limited to 25 unseeded nodes");
  Assignment best = assignment;
  double best_energy = energy(graph, assignment, params);
  // Enumerate ascending so all-authentic (mask 0) wins energy ties.
  for (std::uint64_t mask = 1; mask < (1ull << free_nodes.size()); ++mask) {
    Assignment cand = assignment;
    for (std::size_t b = 0; b < free_nodes.size(); ++b)
      cand[free_nodes[b]] = (mask >> b) & 1;
    double e = energy(graph, cand, params);
    if (e > best_energy) {
      best_energy = e;
      best = cand;
    }
  }
  return best;
}

double pseudo_loglik_and_grad(const ReviewerGraph& graph,
                              const Assignment& assignment,
                              const MRFParams& params,
                              std::array<double, kBehaviorDims + 3>& grad) {
  if (assignment.size() != graph.nodes.size())
    throw std::runtime_error("assignment not total over graph nodes");
  grad.fill(0.0);
  double pll = 0;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const auto& node = graph.nodes[i];
    double theta = node_potential(node, params);
    // Neighbor field: sum over edges of w_ij * (2 y_j - 1).
    double field_c = 0;   // sum c_ij * sign_j
    double field_s = 0;   // sum s_ij * sign_j
    for (const auto& [j, edge_idx] : graph.adjacency[i]) {
      const auto& edge = graph.edges[edge_idx];
      double sign = assignment[j] ? 1.0 : -1.0;
      field_c += edge.collab_count * sign;
      field_s += edge.similarity * sign;
    }
    double a = theta + params.lambda * (field_c + params.mu * field_s);
    double y = assignment[i] ? 1.0 : 0.0;
    double p = sigmoid(a);
    pll += y * std::log(std::max(p, 1e-300)) +
           (1 - y) * std::log(std::max(1 - p, 1e-300));
    double r = y - p;
    for (std::size_t d = 0; d < kBehaviorDims; ++d)
      grad[d] += r * node.behavior[d];
    grad[kBehaviorDims] += r;                                   // bias
    grad[kBehaviorDims + 1] += r * (field_c + params.mu * field_s);  // lambda
    grad[kBehaviorDims + 2] += r * params.lambda * field_s;          // mu
  }
  return pll;
}

MStepResult update_params(const ReviewerGraph& graph,
                          const Assignment& assignment, const MRFParams& init,
                          const MStepOptions& opts) {
  MRFParams params = init;
  params.lambda = std::max(0.0, params.lambda);
  params.mu = std::max(0.0, params.mu);

  auto pack = [](const MRFParams& p) {
    std::array<double, kBehaviorDims + 3> x;
    for (std::size_t d = 0; d < kBehaviorDims; ++d) x[d] = p.w[d];
    x[kBehaviorDims] = p.bias;
    x[kBehaviorDims + 1] = p.lambda;
    x[kBehaviorDims + 2] = p.mu;
    return x;
  };
  auto unpack = [](const std::array<double, kBehaviorDims + 3>& x) {
    MRFParams p;
    for (std::size_t d = 0; d < kBehaviorDims; ++d) p.w[d] = x[d];
    p.bias = x[kBehaviorDims];
    p.lambda = std::max(0.0, x[kBehaviorDims + 1]);
    p.mu = std::max(0.0, x[kBehaviorDims + 2]);
    return p;
  };

  std::array<double, kBehaviorDims + 3> grad;
  double value = pseudo_loglik_and_grad(graph, assignment, params, grad);
  MStepResult result;
  result.params = params;
  double best_value = value;

  double step = opts.step;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    // Projected-gradient norm: clamped coordinates with outward gradient
    // contribute nothing.
    double gnorm = 0;
    for (std::size_t k = 0; k < grad.size(); ++k) {
      bool clamped =
          (k == kBehaviorDims + 1 && params.lambda == 0 && grad[k] < 0) ||
          (k == kBehaviorDims + 2 && params.mu == 0 && grad[k] < 0);
      if (!clamped) gnorm += grad[k] * grad[k];
    }
    gnorm = std::sqrt(gnorm);
    if (gnorm <= opts.tol) {
      result.converged = true;
      break;
    }
    // Ascent step with halving until the PLL improves.
    auto x = pack(params);
    bool improved = false;
    double trial_step = step;
    for (int h = 0; h < 40; ++h) {
      auto x_new = x;
      for (std::size_t k = 0; k < x.size(); ++k)
        x_new[k] += trial_step * grad[k];
      MRFParams cand = unpack(x_new);
      std::array<double, kBehaviorDims + 3> cand_grad;
      double cand_value =
          pseudo_loglik_and_grad(graph, assignment, cand, cand_grad);
      if (cand_value > value) {
        params = cand;
        value = cand_value;
        grad = cand_grad;
        step = trial_step * 2.0;  // allow growth again
        improved = true;
        break;
      }
      trial_step *= 0.5;
    }
    if (!improved) break;
    if (value > best_value) {
      best_value = value;
      result.params = params;
    }
  }
  result.iterations = iter;
  return result;
}

EmResult em_cluster(const ReviewerGraph& graph, const MRFParams& init,
                    int max_iter) {
  if (max_iter < 1) throw std::runtime_error("max_iter must be >= 1");
  EmResult result;
  result.params = init;
  result.assignment = map_assignment(graph, result.params);
  result.energy_trace.push_back(
      energy(graph, result.assignment, result.params));
  for (int iter = 1; iter <= max_iter; ++iter) {
    result.iterations = iter;
    MStepResult m = update_params(graph, result.assignment, result.params);
    if (!m.converged) result.m_step_warning = true;
    result.params = m.params;
    Assignment next = map_assignment(graph, result.params);
    result.energy_trace.push_back(energy(graph, next, result.params));
    if (next == result.assignment) break;
    result.assignment = std::move(next);
  }
  return result;
}

std::set<std::string> deceptive_reviewers(const ReviewerGraph& graph,
                                          const Assignment& assignment) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (assignment[i]) out.insert(graph.nodes[i].reviewer_id);
  }
  return out;
}

std::string dump_graph(const ReviewerGraph& graph) {
  std::ostringstream os;
  os << "# nodes " << graph.nodes.size() << "\n";
  os << "# reviewer_id fraction_verified fraction_five_star "
        "max_reviews_per_day root_task_fraction seed\n";
  for (const auto& node : graph.nodes) {
    os << node.reviewer_id;
    for (double v : node.behavior) os << " " << v;
    os << " "
       << (node.seed_deceptive.has_value()
               ? (*node.seed_deceptive ? "deceptive" : "authentic")
               : "-")
       << "\n";
  }
  os << "# edges " << graph.edges.size() << "\n";
  os << "# i j c s\n";
  for (const auto& e : graph.edges) {
    os << e.i << " " << e.j << " " << e.collab_count << " " << e.similarity
       << "\n";
  }
  return os.str();
}

std::string dump_assignment(const ReviewerGraph& graph,
                            const Assignment& assignment) {
  std::ostringstream os;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    os << graph.nodes[i].reviewer_id << "\t"
       << (assignment[i] ? "deceptive" : "authentic") << "\n";
  }
  return os.str();
}

}  // namespace spamdet
