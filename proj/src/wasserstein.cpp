#include "fts/wasserstein.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "fts/min_cost_flow.hpp"
#include "fts/prokhorov.hpp"

namespace fts {

CovMatrix psd_sqrt(const CovMatrix& s) {
  if (s.max_asymmetry() > 1e-8 * (1.0 + s.m.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("psd_sqrt: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s.m + s.m.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_sqrt: eigendecomposition failed");
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-6 * scale)
    throw std::invalid_argument("psd_sqrt: matrix has a large negative eigenvalue");
  Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd r = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
  return CovMatrix(0.5 * (r + r.transpose()));
}

double wasserstein2_gaussian(const CovMatrix& s1, const CovMatrix& s2) {
  if (s1.dim() != s2.dim())
    throw std::invalid_argument("wasserstein2_gaussian: dimension mismatch");
  CovMatrix r1 = psd_sqrt(s1);
  Eigen::MatrixXd inner = r1.m * s2.m * r1.m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (inner + inner.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("wasserstein2_gaussian: eigendecomposition failed");
  const double cross = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double tr = s1.m.trace() + s2.m.trace();
  double arg = tr - 2.0 * cross;
  if (arg < -1e-6 * std::max(1.0, tr))
    throw std::runtime_error("wasserstein2_gaussian: trace argument below tolerance");
  return std::sqrt(std::max(0.0, arg));
}

CovMatrix empirical_cov(std::span<const Eigen::VectorXd> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical_cov: empty input");
  const int dim = static_cast<int>(samples[0].size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& x : samples) {
    if (x.size() != dim)
      throw std::invalid_argument("empirical_cov: dimension mismatch");
    mean += x;
  }
  mean /= static_cast<double>(samples.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& x : samples) {
    Eigen::VectorXd c = x - mean;
    cov.selfadjointView<Eigen::Lower>().rankUpdate(c);
  }
  cov = cov.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(samples.size());
  return CovMatrix(std::move(cov));
}

double trace_norm(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("trace_norm: eigendecomposition failed");
  return es.eigenvalues().cwiseAbs().sum();
}

double wasserstein_q_discrete(const EmpiricalMeasure& p1, const EmpiricalMeasure& p2,
                              double q, GroundNorm norm) {
  p1.validate();
  p2.validate();
  if (p1.dim() != p2.dim())
    throw std::invalid_argument("wasserstein_q_discrete: dimension mismatch");
  if (!(q >= 1.0)) throw std::invalid_argument("wasserstein_q_discrete: q >= 1");
  if (p1.size() > 512 || p2.size() > 512)
    throw std::invalid_argument("wasserstein_q_discrete: atom count above 512 cap");
  Eigen::MatrixXd cost(p1.size(), p2.size());
  for (int i = 0; i < p1.size(); ++i)
    for (int j = 0; j < p2.size(); ++j)
      cost(i, j) = std::pow(ground_distance(p1.atoms[i], p2.atoms[j], norm), q);
  const double total = transport_cost(p1.weights, p2.weights, cost);
  return std::pow(std::max(0.0, total), 1.0 / q);
}

std::pair<double, double> prokhorov_w2_bound_check(
    const EmpiricalMeasure& p1, const EmpiricalMeasure& p2, double q,
    GroundNorm norm) {
  const double pi = prokhorov_discrete(p1, p2, norm);
  const double w = wasserstein_q_discrete(p1, p2, q, norm);
  return {pi, w};
}

}  // namespace fts
