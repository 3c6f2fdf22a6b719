#ifndef SPAMDET_MINCUT_HPP
#define SPAMDET_MINCUT_HPP

#include <cstddef>
#include <vector>

namespace spamdet {

// Dinic max-flow / min-cut over double capacities. Node ids are
// caller-assigned; source and sink are ordinary node ids.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t node_count);

  // Adds a directed arc; returns nothing. Capacities must be >= 0.
  void add_arc(std::size_t from, std::size_t to, double cap);
  // Adds cap in both directions (pairwise cut cost).
  void add_undirected(std::size_t a, std::size_t b, double cap);

  double solve(std::size_t source, std::size_t sink);

  // After solve: true iff the node is on the source side of the min cut.
  bool source_side(std::size_t node) const;

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    double cap;
  };
  bool bfs(std::size_t s, std::size_t t);
  double dfs(std::size_t v, std::size_t t, double limit);

  std::vector<std::vector<Arc>> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
  std::vector<bool> reachable_;
};

}  // namespace spamdet

#endif
