#include "fts/cov_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace fts {

namespace {

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& s) {
  Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("psd_project: eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd out =
      es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace

void CovKernel::validate() const {
  if (u_grid.size() < 1) throw std::invalid_argument("CovKernel: empty grid");
  if (d < 1) throw std::invalid_argument("CovKernel: d >= 1");
  if (matrix.rows() != dim() || matrix.cols() != dim())
    throw std::invalid_argument("CovKernel: matrix size mismatch");
  for (size_t i = 1; i < u_grid.size(); ++i)
    if (!(u_grid[i] > u_grid[i - 1]))
      throw std::invalid_argument("CovKernel: u grid must increase");
}

double CovKernel::eval(double u, double v, int k, int l) const {
  const int n = static_cast<int>(u_grid.size());
  auto locate = [&](double x) -> std::pair<int, double> {
    if (x < u_grid.front() - 1e-12 || x > u_grid.back() + 1e-12)
      throw std::domain_error("CovKernel::eval: argument outside grid span");
    auto it = std::upper_bound(u_grid.begin(), u_grid.end(), x);
    int g = static_cast<int>(it - u_grid.begin()) - 1;
    g = std::clamp(g, 0, n - 2);
    if (n == 1) return {0, 0.0};
    double t = (x - u_grid[g]) / (u_grid[g + 1] - u_grid[g]);
    return {g, std::clamp(t, 0.0, 1.0)};
  };
  if (n == 1) return matrix(k, l);
  auto [gi, ti] = locate(u);
  auto [gj, tj] = locate(v);
  auto ent = [&](int a, int b) { return matrix(a * d + k, b * d + l); };
  const double v00 = ent(gi, gj), v01 = ent(gi, gj + 1);
  const double v10 = ent(gi + 1, gj), v11 = ent(gi + 1, gj + 1);
  return (1 - ti) * ((1 - tj) * v00 + tj * v01) + ti * ((1 - tj) * v10 + tj * v11);
}

nlohmann::json CovKernel::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < matrix.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (int j = 0; j < matrix.cols(); ++j) r.push_back(matrix(i, j));
    rows.push_back(std::move(r));
  }
  return nlohmann::json{{"u_grid", u_grid},
                        {"d", d},
                        {"lag_bandwidth", lag_bandwidth},
                        {"psd_projected", psd_projected},
                        {"matrix", std::move(rows)}};
}

CovKernel CovKernel::from_json(const nlohmann::json& j) {
  CovKernel k;
  j.at("u_grid").get_to(k.u_grid);
  k.d = j.value("d", 1);
  k.lag_bandwidth = j.value("lag_bandwidth", 0);
  k.psd_projected = j.value("psd_projected", false);
  const auto& rows = j.at("matrix");
  const int n = static_cast<int>(rows.size());
  k.matrix.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj) k.matrix(i, jj) = rows[i][jj].get<double>();
  k.validate();
  return k;
}

CovKernel kernel_from_matrix(std::vector<double> u_grid, int d, Eigen::MatrixXd m,
                             bool project) {
  CovKernel k;
  k.u_grid = std::move(u_grid);
  k.d = d;
  k.matrix = project ? psd_project(m) : std::move(m);
  k.psd_projected = project;
  k.validate();
  return k;
}

CovKernel estimate_lrv(std::span<const GridFunction> series, int bandwidth,
                       bool assume_centered) {
  const int n = static_cast<int>(series.size());
  if (n < 2) throw std::invalid_argument("estimate_lrv: need N >= 2");
  const GridFunction& first = series[0];
  for (const auto& x : series)
    if (!x.same_grid(first)) throw std::invalid_argument("estimate_lrv: grid mismatch");

  const int cols = first.n_nodes() * first.dim();
  Eigen::MatrixXd data(n, cols);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < cols; ++c) {
      const double v = series[i].values()[c];
      if (!std::isfinite(v))
        throw std::invalid_argument("estimate_lrv: non-finite values");
      data(i, c) = v;
    }
  if (!assume_centered) {
    Eigen::RowVectorXd mean = data.colwise().mean();
    data.rowwise() -= mean;
  }

  int b = bandwidth;
  if (b < 0) b = static_cast<int>(std::floor(std::cbrt(static_cast<double>(n))));
  b = std::min(b, n - 1);

  Eigen::MatrixXd acc = (data.transpose() * data) / static_cast<double>(n);
  for (int l = 1; l <= b; ++l) {
    const double w = 1.0 - static_cast<double>(l) / (b + 1);
    Eigen::MatrixXd gam = (data.topRows(n - l).transpose() * data.bottomRows(n - l)) /
                          static_cast<double>(n);
    acc += w * (gam + gam.transpose());
  }

  CovKernel k;
  k.d = first.dim();
  k.u_grid.resize(first.n_nodes());
  for (int g = 0; g < first.n_nodes(); ++g) k.u_grid[g] = first.node(g);
  k.matrix = psd_project(acc);
  k.lag_bandwidth = b;
  k.psd_projected = true;
  k.validate();
  return k;
}

CovMatrix spacetime_cov(const CovKernel& c, std::span<const double> lambda_points,
                        std::span<const double> u_points) {
  c.validate();
  const int nl = static_cast<int>(lambda_points.size());
  const int nu = static_cast<int>(u_points.size());
  const int d = c.d;
  // Kernel values on the requested u points (bilinear in both arguments).
  Eigen::MatrixXd cu(nu * d, nu * d);
  for (int g = 0; g < nu; ++g)
    for (int h = 0; h < nu; ++h)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          cu(g * d + k, h * d + l) = c.eval(u_points[g], u_points[h], k, l);

  const int dim = nl * nu * d;
  Eigen::MatrixXd m(dim, dim);
  for (int a = 0; a < nl; ++a) {
    for (int b = 0; b < nl; ++b) {
      const double lam = std::min(lambda_points[a], lambda_points[b]);
      m.block(a * nu * d, b * nu * d, nu * d, nu * d) = lam * cu;
    }
  }
  return CovMatrix(std::move(m));
}

}  // namespace fts
