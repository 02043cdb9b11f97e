#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "fts/cov_matrix.hpp"
#include "fts/grid_function.hpp"

namespace fts {

/// Discretized long-run covariance kernel c(u, v): a symmetric (n*d) x (n*d)
/// matrix of blocks c[k,l](u_g, u_h) over an increasing u grid. Entries at
/// non-grid arguments are bilinearly interpolated.
struct CovKernel {
  std::vector<double> u_grid;
  int d = 1;
  Eigen::MatrixXd matrix;
  int lag_bandwidth = 0;
  bool psd_projected = false;

  int dim() const { return static_cast<int>(u_grid.size()) * d; }

  double eval(double u, double v, int k = 0, int l = 0) const;

  void validate() const;

  nlohmann::json to_json() const;
  static CovKernel from_json(const nlohmann::json& j);
};

/// Wrap a closed-form kernel matrix (e.g. generator truth) as a CovKernel;
/// optionally PSD-project it.
CovKernel kernel_from_matrix(std::vector<double> u_grid, int d, Eigen::MatrixXd m,
                             bool project = true);

/// Bartlett lag-window long-run covariance estimator:
///   c_hat = Gamma_0 + sum_{l=1}^{b} (1 - l/(b+1)) (Gamma_l + Gamma_l^T),
/// with Gamma_l(u,v) = (1/N) sum_{i<=N-l} X_i(u) X_{i+l}(v) on the centered
/// series. Output is symmetrized and PSD-projected (negative eigenvalues
/// clamped at zero). bandwidth < 0 selects floor(N^(1/3)).
CovKernel estimate_lrv(std::span<const GridFunction> series, int bandwidth = -1,
                       bool assume_centered = false);

/// Space-time covariance of the Brownian limit on a product grid:
/// entry((lambda,u),(lambda',u')) = min(lambda, lambda') * c(u, u').
/// Ordering matches vectorize: lambda-major, then u, then component.
CovMatrix spacetime_cov(const CovKernel& c, std::span<const double> lambda_points,
                        std::span<const double> u_points);

}  // namespace fts
