#include "fts/min_cost_flow.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fts {

namespace {

constexpr double kEps = 1e-13;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Successive shortest paths with potentials, dense Dijkstra. Capacities and
// costs are doubles; costs must be non-negative.
struct Mcmf {
  struct Edge {
    int to;
    double cap;
    double cost;
    int rev;
  };
  std::vector<std::vector<Edge>> g;
  explicit Mcmf(int n) : g(n) {}

  void add_edge(int from, int to, double cap, double cost) {
    g[from].push_back({to, cap, cost, static_cast<int>(g[to].size())});
    g[to].push_back({from, 0.0, -cost, static_cast<int>(g[from].size()) - 1});
  }

  // Sends as much flow as possible from s to t; returns total cost.
  double run(int s, int t) {
    const int n = static_cast<int>(g.size());
    std::vector<double> pot(n, 0.0), dist(n);
    std::vector<int> pv(n), pe(n);
    std::vector<char> done(n);
    double total_cost = 0.0;
    while (true) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(done.begin(), done.end(), 0);
      dist[s] = 0.0;
      for (int iter = 0; iter < n; ++iter) {
        int v = -1;
        for (int i = 0; i < n; ++i)
          if (!done[i] && dist[i] < kInf && (v < 0 || dist[i] < dist[v])) v = i;
        if (v < 0) break;
        done[v] = 1;
        for (int ei = 0; ei < static_cast<int>(g[v].size()); ++ei) {
          const Edge& e = g[v][ei];
          if (e.cap <= kEps) continue;
          double rc = e.cost + pot[v] - pot[e.to];
          if (rc < 0.0) rc = 0.0;  // roundoff guard
          if (dist[v] + rc < dist[e.to] - 1e-18) {
            dist[e.to] = dist[v] + rc;
            pv[e.to] = v;
            pe[e.to] = ei;
          }
        }
      }
      if (dist[t] >= kInf) break;
      for (int i = 0; i < n; ++i)
        if (dist[i] < kInf) pot[i] += dist[i];
      double f = kInf;
      for (int v = t; v != s; v = pv[v]) f = std::min(f, g[pv[v]][pe[v]].cap);
      if (f <= kEps) break;
      for (int v = t; v != s; v = pv[v]) {
        Edge& e = g[pv[v]][pe[v]];
        e.cap -= f;
        g[v][e.rev].cap += f;
        total_cost += f * e.cost;
      }
    }
    return total_cost;
  }
};

}  // namespace

double transport_cost(const std::vector<double>& supply,
                      const std::vector<double>& demand,
                      const Eigen::MatrixXd& cost) {
  const int n1 = static_cast<int>(supply.size());
  const int n2 = static_cast<int>(demand.size());
  if (cost.rows() != n1 || cost.cols() != n2)
    throw std::invalid_argument("transport_cost: cost matrix shape mismatch");
  double s1 = 0.0, s2 = 0.0;
  for (double v : supply) {
    if (v < 0.0) throw std::invalid_argument("transport_cost: negative supply");
    s1 += v;
  }
  for (double v : demand) {
    if (v < 0.0) throw std::invalid_argument("transport_cost: negative demand");
    s2 += v;
  }
  if (std::abs(s1 - s2) > 1e-9)
    throw std::invalid_argument("transport_cost: total supply != total demand");
  if (cost.minCoeff() < 0.0)
    throw std::invalid_argument("transport_cost: costs must be >= 0");

  Mcmf net(n1 + n2 + 2);
  const int src = n1 + n2, dst = n1 + n2 + 1;
  for (int i = 0; i < n1; ++i) net.add_edge(src, i, supply[i], 0.0);
  for (int j = 0; j < n2; ++j) net.add_edge(n1 + j, dst, demand[j], 0.0);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) net.add_edge(i, n1 + j, kInf, cost(i, j));
  return net.run(src, dst);
}

}  // namespace fts
