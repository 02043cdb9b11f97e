#include "fts/prokhorov.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fts/max_flow.hpp"

namespace fts {

// For a distance cap t, the least mass any coupling must transport over
// pairs with distance > t is 1 - maxflow on the bipartite graph whose edges
// are the pairs with d(x_i, y_j) <= t. The deficit D(t) is non-increasing
// and right-continuous with breakpoints at the pairwise distances, so
//   pi = min over breakpoints t of max(t, D(t))
// (a value D(t_k) > t_k is feasible at chi = D(t_k), and once D(t_k) <= t_k
// the infimum t_k is reached). Edges are added incrementally so each level
// only pushes the additional flow.
double prokhorov_discrete(const EmpiricalMeasure& p1, const EmpiricalMeasure& p2,
                          GroundNorm norm) {
  p1.validate();
  p2.validate();
  if (p1.dim() != p2.dim())
    throw std::invalid_argument("prokhorov_discrete: dimension mismatch");

  const int n1 = p1.size(), n2 = p2.size();
  struct Pair {
    double d;
    int i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<size_t>(n1) * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      pairs.push_back({ground_distance(p1.atoms[i], p2.atoms[j], norm), i, j});
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) { return a.d < b.d; });

  MaxFlow net(n1 + n2 + 2);
  const int src = n1 + n2, dst = n1 + n2 + 1;
  for (int i = 0; i < n1; ++i) net.add_edge(src, i, p1.weights[i]);
  for (int j = 0; j < n2; ++j) net.add_edge(n1 + j, dst, p2.weights[j]);

  double best = 1.0;  // the Prokhorov distance never exceeds 1
  double flow = 0.0;
  size_t k = 0;
  // Virtual level t = 0 (possible exact-zero distances) is covered by the
  // first loop iteration when pairs[0].d == 0; otherwise D = 1 and the
  // candidate max(0, 1) = 1 equals the initial best.
  while (k < pairs.size()) {
    const double t = pairs[k].d;
    if (t >= best) break;  // later candidates are >= t >= best
    while (k < pairs.size() && pairs[k].d == t) {
      net.add_edge(pairs[k].i, n1 + pairs[k].j, 2.0);
      ++k;
    }
    flow += net.run(src, dst);
    const double deficit = std::max(0.0, 1.0 - flow);
    best = std::min(best, std::max(t, deficit));
  }
  return best;
}

}  // namespace fts
