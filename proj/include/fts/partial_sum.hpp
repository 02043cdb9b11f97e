#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fts/grid_function.hpp"

namespace fts {

/// Values of the normalized partial-sum process P_N(lambda, u) on the product
/// of a lambda grid (rows) and the u grid of the observations (columns,
/// component-minor for d > 1). Row 0 is identically zero and row k equals row
/// k-1 plus (X_k - center_k)/sqrt(N). The same container also carries sampled
/// Brownian motion paths, whose lambda grid need not be uniform.
class PartialSumField {
 public:
  PartialSumField(Interval iv, int n_nodes, int d, std::vector<double> lambda_grid,
                  bool centered);

  int n_steps() const { return static_cast<int>(lambda_grid_.size()) - 1; }
  const std::vector<double>& lambda_grid() const { return lambda_grid_; }
  const Interval& interval() const { return interval_; }
  int n_nodes() const { return n_nodes_; }
  int dim() const { return d_; }
  double u_node(int g) const {
    return interval_.lower + g * interval_.length() / (n_nodes_ - 1);
  }

  /// rows: lambda index; cols: node * d + component.
  Eigen::MatrixXd& values() { return values_; }
  const Eigen::MatrixXd& values() const { return values_; }
  bool centered() const { return centered_; }

  /// Step evaluation: lambda maps to the last grid row with lambda_row <=
  /// lambda (the partial-sum convention, floor(lambda N) for the uniform
  /// grid); u is linearly interpolated.
  double eval_step(double lambda, double u, int comp = 0) const;

  /// Linearly interpolated version, linear in lambda between grid rows and
  /// linear in u between nodes.
  double eval_linear(double lambda, double u, int comp = 0) const;

  /// CSV export with columns (k, lambda, u_index, u, component, value).
  void to_csv(std::ostream& os) const;

 private:
  Interval interval_;
  int n_nodes_;
  int d_;
  std::vector<double> lambda_grid_;
  Eigen::MatrixXd values_;
  bool centered_;

  int row_at_or_before(double lambda) const;
  std::pair<int, double> u_locate(double u) const;
};

/// Build P_N from a series and explicit centers (a single shared center or
/// one per observation).
PartialSumField build_partial_sum(std::span<const GridFunction> series,
                                  std::span<const GridFunction> centers);

/// Build P_N centered at the empirical mean of the series itself.
PartialSumField build_partial_sum_empirical(std::span<const GridFunction> series);

}  // namespace fts
