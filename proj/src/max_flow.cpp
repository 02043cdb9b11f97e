#include "fts/max_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace fts {

namespace {
constexpr double kCapEps = 1e-14;
}

MaxFlow::MaxFlow(int n) : g_(n), level_(n), iter_(n) {}

int MaxFlow::add_edge(int from, int to, double cap) {
  g_[from].push_back({to, cap, static_cast<int>(g_[to].size())});
  g_[to].push_back({from, 0.0, static_cast<int>(g_[from].size()) - 1});
  return static_cast<int>(g_[from].size()) - 1;
}

bool MaxFlow::bfs(int s, int t) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const Edge& e : g_[v]) {
      if (e.cap > kCapEps && level_[e.to] < 0) {
        level_[e.to] = level_[v] + 1;
        q.push(e.to);
      }
    }
  }
  return level_[t] >= 0;
}

double MaxFlow::dfs(int v, int t, double f) {
  if (v == t) return f;
  for (int& i = iter_[v]; i < static_cast<int>(g_[v].size()); ++i) {
    Edge& e = g_[v][i];
    if (e.cap > kCapEps && level_[v] < level_[e.to]) {
      double d = dfs(e.to, t, std::min(f, e.cap));
      if (d > kCapEps) {
        e.cap -= d;
        g_[e.to][e.rev].cap += d;
        return d;
      }
    }
  }
  return 0.0;
}

double MaxFlow::run(int s, int t) {
  double flow = 0.0;
  while (bfs(s, t)) {
    std::fill(iter_.begin(), iter_.end(), 0);
    double f;
    while ((f = dfs(s, t, std::numeric_limits<double>::infinity())) > kCapEps)
      flow += f;
  }
  return flow;
}

}  // namespace fts
