#include "fts/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fts/rng.hpp"

namespace fts {

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols()) throw std::invalid_argument("psd_factor: square matrix");
  const int n = static_cast<int>(s.rows());
  const double scale = s.trace() / n;
  for (double eps : {0.0, 1e-12, 1e-10, 1e-8}) {
    Eigen::MatrixXd jittered = s;
    if (eps > 0.0)
      jittered += (eps * scale) * Eigen::MatrixXd::Identity(n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(jittered);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_factor: factorization failed after jitter escalation");
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal();
}

PartialSumField sample_brownian(const CovKernel& c, std::span<const double> lambda_grid,
                                uint64_t seed) {
  c.validate();
  if (!c.psd_projected)
    throw std::invalid_argument("sample_brownian: kernel must be PSD-projected");
  if (lambda_grid.empty() || lambda_grid.front() != 0.0)
    throw std::invalid_argument("sample_brownian: lambda grid must start at 0");
  Eigen::MatrixXd fac = psd_factor(c.matrix);
  return sample_brownian_with_factor(c, fac, lambda_grid, seed);
}

PartialSumField sample_brownian_with_factor(const CovKernel& c,
                                            const Eigen::MatrixXd& factor,
                                            std::span<const double> lambda_grid,
                                            uint64_t seed) {
  const int m = c.dim();
  const int rows = static_cast<int>(lambda_grid.size());
  // Single-node kernels are stored on a two-node grid with equal columns so
  // the field representation stays valid.
  const bool single = c.u_grid.size() == 1;
  Interval iv = single ? Interval{c.u_grid[0] - 0.5, c.u_grid[0] + 0.5, false}
                       : Interval{c.u_grid.front(), c.u_grid.back(), false};
  const int n_nodes = single ? 2 : static_cast<int>(c.u_grid.size());
  PartialSumField path(iv, n_nodes, c.d,
                       std::vector<double>(lambda_grid.begin(), lambda_grid.end()),
                       true);
  Rng rng(seed);
  Eigen::VectorXd z(factor.cols()), w = Eigen::VectorXd::Zero(m);
  for (int r = 1; r < rows; ++r) {
    const double dl = lambda_grid[r] - lambda_grid[r - 1];
    for (int i = 0; i < factor.cols(); ++i) z[i] = rng.normal();
    w += std::sqrt(dl) * (factor * z);
    for (int col = 0; col < m; ++col) path.values()(r, col) = w[col];
    if (single)
      for (int l = 0; l < c.d; ++l) path.values()(r, c.d + l) = w[l];
  }
  return path;
}

double sup_quantile(const CovKernel& c, double alpha, int n_rep,
                    int lambda_resolution, uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("sup_quantile: alpha in (0,1)");
  if (n_rep < 100) throw std::invalid_argument("sup_quantile: n_rep >= 100");
  if (lambda_resolution < 1)
    throw std::invalid_argument("sup_quantile: resolution >= 1");
  c.validate();
  Eigen::MatrixXd fac = psd_factor(c.matrix);

  const int m = c.dim();
  const int steps = lambda_resolution;
  const double dl = 1.0 / steps;
  const double sq = std::sqrt(dl);
  std::vector<double> sups(n_rep);
  Eigen::VectorXd z(fac.cols()), w(m);
  for (int r = 0; r < n_rep; ++r) {
    Rng rng(derive_seed(seed, "supq", static_cast<uint64_t>(r)));
    w.setZero();
    double s = 0.0;
    for (int j = 0; j < steps; ++j) {
      for (int i = 0; i < fac.cols(); ++i) z[i] = rng.normal();
      w.noalias() += sq * (fac * z);
      s = std::max(s, w.cwiseAbs().maxCoeff());
    }
    sups[r] = s;
  }
  std::sort(sups.begin(), sups.end());
  const int idx = std::clamp(
      static_cast<int>(std::ceil((1.0 - alpha) * n_rep)) - 1, 0, n_rep - 1);
  return sups[idx];
}

}  // namespace fts
