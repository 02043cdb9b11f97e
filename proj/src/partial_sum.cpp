#include "fts/partial_sum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace fts {

namespace {
constexpr double kSnap = 1e-12;
}

PartialSumField::PartialSumField(Interval iv, int n_nodes, int d,
                                 std::vector<double> lambda_grid, bool centered)
    : interval_(iv),
      n_nodes_(n_nodes),
      d_(d),
      lambda_grid_(std::move(lambda_grid)),
      centered_(centered) {
  interval_.validate();
  if (n_nodes_ < 2) throw std::invalid_argument("PartialSumField: n_nodes >= 2");
  if (d_ < 1) throw std::invalid_argument("PartialSumField: d >= 1");
  if (lambda_grid_.empty() || lambda_grid_.front() != 0.0)
    throw std::invalid_argument("PartialSumField: lambda grid must start at 0");
  for (size_t i = 1; i < lambda_grid_.size(); ++i)
    if (!(lambda_grid_[i] > lambda_grid_[i - 1]))
      throw std::invalid_argument("PartialSumField: lambda grid must increase");
  values_.setZero(static_cast<int>(lambda_grid_.size()), n_nodes_ * d_);
}

int PartialSumField::row_at_or_before(double lambda) const {
  if (lambda < 0.0 || lambda > lambda_grid_.back() + kSnap)
    throw std::domain_error("PartialSumField: lambda out of range");
  auto it = std::upper_bound(lambda_grid_.begin(), lambda_grid_.end(), lambda);
  int k = static_cast<int>(it - lambda_grid_.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(lambda_grid_.size()) - 1);
}

std::pair<int, double> PartialSumField::u_locate(double u) const {
  if (!interval_.contains(u)) {
    if (interval_.truncation_of_line) return {-1, 0.0};
    throw std::domain_error("PartialSumField: u out of range");
  }
  const double mesh = interval_.length() / (n_nodes_ - 1);
  const double t = (u - interval_.lower) / mesh;
  int g = static_cast<int>(std::floor(t));
  g = std::clamp(g, 0, n_nodes_ - 2);
  double frac = t - g;
  if (frac <= kSnap) frac = 0.0;
  if (frac >= 1.0 - kSnap) {
    ++g;
    frac = 0.0;
    g = std::min(g, n_nodes_ - 1);
  }
  return {g, frac};
}

double PartialSumField::eval_step(double lambda, double u, int comp) const {
  const int k = row_at_or_before(lambda);
  auto [g, frac] = u_locate(u);
  if (g < 0) return 0.0;
  const double a = values_(k, g * d_ + comp);
  if (frac == 0.0) return a;
  const double b = values_(k, (g + 1) * d_ + comp);
  return a + frac * (b - a);
}

double PartialSumField::eval_linear(double lambda, double u, int comp) const {
  int k = row_at_or_before(lambda);
  const int last = static_cast<int>(lambda_grid_.size()) - 1;
  auto [g, frac] = u_locate(u);
  if (g < 0) return 0.0;
  auto row_val = [&](int row) {
    const double a = values_(row, g * d_ + comp);
    if (frac == 0.0) return a;
    const double b = values_(row, (g + 1) * d_ + comp);
    return a + frac * (b - a);
  };
  if (k >= last) return row_val(last);
  const double t =
      (lambda - lambda_grid_[k]) / (lambda_grid_[k + 1] - lambda_grid_[k]);
  if (t <= kSnap) return row_val(k);
  if (t >= 1.0 - kSnap) return row_val(k + 1);
  const double lo = row_val(k), hi = row_val(k + 1);
  return lo + t * (hi - lo);
}

void PartialSumField::to_csv(std::ostream& os) const {
  os << "k,lambda,u_index,u,component,value\n";
  char buf[64];
  for (int k = 0; k < static_cast<int>(lambda_grid_.size()); ++k) {
    for (int g = 0; g < n_nodes_; ++g) {
      for (int l = 0; l < d_; ++l) {
        std::snprintf(buf, sizeof(buf), "%.17g", lambda_grid_[k]);
        os << k << ',' << buf << ',' << g << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", u_node(g));
        os << buf << ',' << l << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", values_(k, g * d_ + l));
        os << buf << '\n';
      }
    }
  }
}

namespace {

PartialSumField build_impl(std::span<const GridFunction> series,
                           std::span<const GridFunction> centers, bool centered_flag) {
  if (series.empty()) throw std::invalid_argument("build_partial_sum: empty series");
  const GridFunction& first = series[0];
  for (const auto& x : series)
    if (!x.same_grid(first))
      throw std::invalid_argument("build_partial_sum: grid mismatch in series");
  for (const auto& c : centers)
    if (!c.same_grid(first))
      throw std::invalid_argument("build_partial_sum: center grid mismatch");
  if (!centers.empty() && centers.size() != 1 && centers.size() != series.size())
    throw std::invalid_argument("build_partial_sum: centers must have size 1 or N");

  const int n = static_cast<int>(series.size());
  std::vector<double> lambdas(n + 1);
  for (int k = 0; k <= n; ++k) lambdas[k] = static_cast<double>(k) / n;
  PartialSumField field(first.interval(), first.n_nodes(), first.dim(),
                        std::move(lambdas), centered_flag);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const int cols = first.n_nodes() * first.dim();
  for (int k = 1; k <= n; ++k) {
    const GridFunction& x = series[k - 1];
    const GridFunction* c = nullptr;
    if (centers.size() == 1) c = &centers[0];
    else if (!centers.empty()) c = &centers[k - 1];
    for (int col = 0; col < cols; ++col) {
      const double xc = x.values()[col] - (c ? c->values()[col] : 0.0);
      field.values()(k, col) = field.values()(k - 1, col) + scale * xc;
    }
  }
  return field;
}

}  // namespace

PartialSumField build_partial_sum(std::span<const GridFunction> series,
                                  std::span<const GridFunction> centers) {
  return build_impl(series, centers, !centers.empty());
}

PartialSumField build_partial_sum_empirical(std::span<const GridFunction> series) {
  if (series.empty()) throw std::invalid_argument("build_partial_sum: empty series");
  GridFunction mean = mean_estimate(series);
  std::vector<GridFunction> centers{std::move(mean)};
  return build_impl(series, centers, true);
}

}  // namespace fts
