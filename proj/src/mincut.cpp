#include "spamdet/mincut.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace spamdet {

namespace {
// Residual capacities below this are treated as saturated.
constexpr double kEps = 1e-11;
}  // namespace

MaxFlow::MaxFlow(std::size_t node_count)
    : arcs_(node_count),
      level_(node_count),
      iter_(node_count),
      reachable_(node_count, false) {}

void MaxFlow::add_arc(std::size_t from, std::size_t to, double cap) {
  if (cap <= 0 || from == to) return;
  arcs_[from].push_back({to, arcs_[to].size(), cap});
  arcs_[to].push_back({from, arcs_[from].size() - 1, 0.0});
}

void MaxFlow::add_undirected(std::size_t a, std::size_t b, double cap) {
  if (cap <= 0 || a == b) return;
  arcs_[a].push_back({b, arcs_[b].size(), cap});
  arcs_[b].push_back({a, arcs_[a].size() - 1, cap});
}

bool MaxFlow::bfs(std::size_t s, std::size_t t) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<std::size_t> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop();
    for (const Arc& a : arcs_[v]) {
      if (a.cap > kEps && level_[a.to] < 0) {
        level_[a.to] = level_[v] + 1;
        q.push(a.to);
      }
    }
  }
  return level_[t] >= 0;
}

double MaxFlow::dfs(std::size_t v, std::size_t t, double limit) {
  if (v == t) return limit;
  for (std::size_t& i = iter_[v]; i < arcs_[v].size(); ++i) {
    Arc& a = arcs_[v][i];
    if (a.cap > kEps && level_[v] < level_[a.to]) {
      double d = dfs(a.to, t, std::min(limit, a.cap));
      if (d > 0) {
        a.cap -= d;
        arcs_[a.to][a.rev].cap += d;
        return d;
      }
    }
  }
  return 0;
}

double MaxFlow::solve(std::size_t source, std::size_t sink) {
  double flow = 0;
  while (bfs(source, sink)) {
    std::fill(iter_.begin(), iter_.end(), 0);
    double f;
    while ((f = dfs(source, sink,
                    std::numeric_limits<double>::infinity())) > 0) {
      flow += f;
    }
  }
  // Min-cut side: nodes still reachable from the source in the residual.
  std::fill(reachable_.begin(), reachable_.end(), false);
  std::queue<std::size_t> q;
  reachable_[source] = true;
  q.push(source);
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop();
    for (const Arc& a : arcs_[v]) {
      if (a.cap > kEps && !reachable_[a.to]) {
        reachable_[a.to] = true;
        q.push(a.to);
      }
    }
  }
  return flow;
}

bool MaxFlow::source_side(std::size_t node) const { return reachable_[node]; }

}  // namespace spamdet
