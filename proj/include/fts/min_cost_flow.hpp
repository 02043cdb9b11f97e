#pragma once

#include <Eigen/Core>
#include <vector>

namespace fts {

/// Exact optimal transport on a dense bipartite graph: minimize
/// sum plan(i,j) * cost(i,j) over plans with row sums `supply` and column
/// sums `demand` (both summing to the same total). Successive shortest paths
/// with potentials; costs must be >= 0.
double transport_cost(const std::vector<double>& supply,
                      const std::vector<double>& demand,
                      const Eigen::MatrixXd& cost);

}  // namespace fts
