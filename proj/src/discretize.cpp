#include "fts/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fts {

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> pts(count);
  if (count == 1) {
    pts[0] = lo;
    return pts;
  }
  for (int i = 0; i < count; ++i)
    pts[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return pts;
}

// Smallest index whose point lies within dist of x (points sorted ascending).
int first_within(const std::vector<double>& pts, double x, double dist) {
  auto it = std::lower_bound(pts.begin(), pts.end(), x - dist);
  return static_cast<int>(it - pts.begin());
}

double min_dist(const std::vector<double>& pts, double x) {
  auto it = std::lower_bound(pts.begin(), pts.end(), x);
  double best = std::numeric_limits<double>::infinity();
  if (it != pts.end()) best = std::min(best, std::abs(*it - x));
  if (it != pts.begin()) best = std::min(best, std::abs(*(it - 1) - x));
  return best;
}

}  // namespace

DiscretizationGrid make_grid(int N, double rho, double sigma_mesh, double c_count) {
  if (N < 1) throw std::invalid_argument("make_grid: N >= 1");
  if (!(rho > 0.0) || !(rho < sigma_mesh) || !(sigma_mesh < 1.0))
    throw std::invalid_argument("make_grid: need 0 < rho < sigma_mesh < 1");

  DiscretizationGrid g;
  g.N = N;
  g.rho = rho;
  g.sigma_mesh = sigma_mesh;
  g.c_count = c_count;
  g.u_bound = std::pow(N, rho);

  const int n_lambda = static_cast<int>(std::ceil(std::pow(N, sigma_mesh)));
  const int n_u = static_cast<int>(std::ceil(2.0 * std::pow(N, rho + sigma_mesh)));
  g.lambda_points = linspace(0.0, 1.0, n_lambda);
  g.u_points = linspace(-g.u_bound, g.u_bound, n_u);

  // Mesh invariant. Evenly spaced endpoints give max distance = spacing / 2.
  const double mesh_bound = std::pow(N, -sigma_mesh);
  const double lam_gap = n_lambda == 1 ? 1.0 : 0.5 / (n_lambda - 1);
  const double u_gap = g.u_bound / (n_u - 1);
  if (lam_gap > mesh_bound + 1e-12 || u_gap > mesh_bound + 1e-12)
    throw std::runtime_error("make_grid: mesh condition violated");
  // Count invariant.
  const double cap = c_count * std::pow(N, rho + 2.0 * sigma_mesh);
  if (static_cast<double>(n_lambda) * n_u > cap)
    throw std::runtime_error("make_grid: gridpoint count exceeds bound");
  return g;
}

std::pair<int, int> DiscretizationGrid::nearest(double lambda, double u) const {
  const double d_star =
      std::max(min_dist(lambda_points, lambda), min_dist(u_points, u));
  const int il = first_within(lambda_points, lambda, d_star);
  const int iu = first_within(u_points, u, d_star);
  return {il, iu};
}

double DiscretizedField::eval(double lambda, double u, int comp) const {
  if (std::abs(u) > grid.u_bound) return 0.0;  // property Di
  auto [il, iu] = grid.nearest(lambda, u);
  const int row = il * static_cast<int>(grid.u_points.size()) + iu;
  return values(row, comp);
}

DiscretizedField discretize(const std::function<double(double, double)>& f,
                            const DiscretizationGrid& grid) {
  DiscretizedField out;
  out.grid = grid;
  out.d = 1;
  out.values.resize(grid.total_points(), 1);
  const int n_u = static_cast<int>(grid.u_points.size());
  for (size_t il = 0; il < grid.lambda_points.size(); ++il)
    for (int iu = 0; iu < n_u; ++iu)
      out.values(static_cast<int>(il) * n_u + iu, 0) =
          f(grid.lambda_points[il], grid.u_points[iu]);
  return out;
}

DiscretizedField discretize(const PartialSumField& f, const DiscretizationGrid& grid,
                            FieldEval mode) {
  DiscretizedField out;
  out.grid = grid;
  out.d = f.dim();
  out.values.resize(grid.total_points(), f.dim());
  const int n_u = static_cast<int>(grid.u_points.size());
  for (size_t il = 0; il < grid.lambda_points.size(); ++il) {
    for (int iu = 0; iu < n_u; ++iu) {
      for (int l = 0; l < f.dim(); ++l) {
        const double v =
            mode == FieldEval::step
                ? f.eval_step(grid.lambda_points[il], grid.u_points[iu], l)
                : f.eval_linear(grid.lambda_points[il], grid.u_points[iu], l);
        out.values(static_cast<int>(il) * n_u + iu, l) = v;
      }
    }
  }
  return out;
}

Eigen::VectorXd vectorize(const DiscretizedField& f) {
  const int total = f.grid.total_points();
  Eigen::VectorXd v(total * f.d);
  for (int r = 0; r < total; ++r)
    for (int l = 0; l < f.d; ++l) v[r * f.d + l] = f.values(r, l);
  return v;
}

}  // namespace fts
