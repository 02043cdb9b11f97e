#pragma once

#include <vector>

namespace fts {

/// Dinic max-flow with real capacities. Capacities below 1e-14 are treated as
/// saturated. Supports incremental use: add edges between run() calls and the
/// previous flow is kept, only the increase is pushed.
class MaxFlow {
 public:
  explicit MaxFlow(int n);

  /// Returns the edge id (for residual inspection).
  int add_edge(int from, int to, double cap);

  /// Max flow from s to t given the current residual network; returns the
  /// ADDITIONAL flow pushed by this call.
  double run(int s, int t);

 private:
  struct Edge {
    int to;
    double cap;
    int rev;
  };
  std::vector<std::vector<Edge>> g_;
  std::vector<int> level_, iter_;

  bool bfs(int s, int t);
  double dfs(int v, int t, double f);
};

}  // namespace fts
