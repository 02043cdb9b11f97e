#include "fts/grid_function.hpp"

#include <algorithm>
#include <cmath>

namespace fts {

namespace {
// Snap tolerance for node hits in interpolation, keeps restriction and
// resampling exact at shared nodes.
constexpr double kNodeSnap = 1e-12;
}  // namespace

GridFunction::GridFunction(Interval iv, int n_nodes, int d)
    : interval_(iv), n_nodes_(n_nodes), d_(d) {
  interval_.validate();
  if (n_nodes_ < 2) throw std::invalid_argument("GridFunction: n_nodes must be >= 2");
  if (d_ < 1) throw std::invalid_argument("GridFunction: d must be >= 1");
  values_.assign(static_cast<size_t>(n_nodes_) * d_, 0.0);
}

GridFunction::GridFunction(Interval iv, int n_nodes, int d, std::vector<double> values)
    : GridFunction(iv, n_nodes, d) {
  if (values.size() != values_.size())
    throw std::invalid_argument("GridFunction: values size mismatch");
  values_ = std::move(values);
  check_finite();
}

void GridFunction::check_finite() const {
  for (double v : values_)
    if (!std::isfinite(v))
      throw std::invalid_argument("GridFunction: values must be finite");
}

Eigen::VectorXd GridFunction::eval(double u) const {
  Eigen::VectorXd out(d_);
  if (!interval_.contains(u)) {
    if (interval_.truncation_of_line) {
      out.setZero();
      return out;
    }
    throw std::domain_error("GridFunction::eval: argument outside interval");
  }
  const double t = (u - interval_.lower) / mesh();
  int j = static_cast<int>(std::floor(t));
  j = std::clamp(j, 0, n_nodes_ - 2);
  const double frac = t - j;
  if (frac <= kNodeSnap) {
    for (int l = 0; l < d_; ++l) out[l] = value(j, l);
  } else if (frac >= 1.0 - kNodeSnap) {
    for (int l = 0; l < d_; ++l) out[l] = value(j + 1, l);
  } else {
    for (int l = 0; l < d_; ++l)
      out[l] = value(j, l) + frac * (value(j + 1, l) - value(j, l));
  }
  return out;
}

double GridFunction::eval1(double u) const {
  if (!interval_.contains(u)) {
    if (interval_.truncation_of_line) return 0.0;
    throw std::domain_error("GridFunction::eval1: argument outside interval");
  }
  const double t = (u - interval_.lower) / mesh();
  int j = static_cast<int>(std::floor(t));
  j = std::clamp(j, 0, n_nodes_ - 2);
  const double frac = t - j;
  if (frac <= kNodeSnap) return values_[j * d_];
  if (frac >= 1.0 - kNodeSnap) return values_[(j + 1) * d_];
  return values_[j * d_] + frac * (values_[(j + 1) * d_] - values_[j * d_]);
}

std::pair<GridFunction, GridFunction> align(const GridFunction& a,
                                            const GridFunction& b) {
  if (!(a.interval() == b.interval()))
    throw std::invalid_argument("align: interval mismatch");
  if (a.dim() != b.dim()) throw std::invalid_argument("align: dimension mismatch");
  if (a.n_nodes() == b.n_nodes()) return {a, b};
  const GridFunction& coarse = a.n_nodes() < b.n_nodes() ? a : b;
  const GridFunction& fine = a.n_nodes() < b.n_nodes() ? b : a;
  GridFunction resampled(fine.interval(), fine.n_nodes(), fine.dim());
  for (int j = 0; j < fine.n_nodes(); ++j) {
    Eigen::VectorXd v = coarse.eval(fine.node(j));
    for (int l = 0; l < fine.dim(); ++l) resampled.value(j, l) = v[l];
  }
  if (a.n_nodes() < b.n_nodes()) return {resampled, fine};
  return {fine, resampled};
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  if (same_grid(o)) {
    for (size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  auto [x, y] = align(*this, o);
  *this = x;
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += y.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  if (same_grid(o)) {
    for (size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  auto [x, y] = align(*this, o);
  *this = x;
  for (size_t i = 0; i < values_.size(); ++i) values_[i] -= y.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double s, GridFunction f) { return f *= s; }

double sup_norm(const GridFunction& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

GridFunction restrict_to(const GridFunction& f, const Interval& sub) {
  sub.validate();
  if (!f.interval().contains(sub))
    throw std::invalid_argument("restrict_to: sub not contained in interval");
  if (sub.lower == f.interval().lower && sub.upper == f.interval().upper) {
    GridFunction g = f;
    return g;
  }
  const double density = (f.n_nodes() - 1) / f.interval().length();
  const int n_new =
      std::max<int>(2, static_cast<int>(std::llround(density * sub.length())) + 1);
  GridFunction g(sub, n_new, f.dim());
  for (int j = 0; j < n_new; ++j) {
    Eigen::VectorXd v = f.eval(g.node(j));
    for (int l = 0; l < f.dim(); ++l) g.value(j, l) = v[l];
  }
  return g;
}

double holder_quotient(const GridFunction& f, double xi) {
  if (!(xi > 0.0) || !(xi <= 1.0))
    throw std::invalid_argument("holder_quotient: xi must be in (0, 1]");
  double q = 0.0;
  for (int i = 0; i < f.n_nodes(); ++i) {
    for (int j = i + 1; j < f.n_nodes(); ++j) {
      double diff = 0.0;
      for (int l = 0; l < f.dim(); ++l)
        diff = std::max(diff, std::abs(f.value(i, l) - f.value(j, l)));
      const double dist = f.node(j) - f.node(i);
      q = std::max(q, diff / std::pow(dist, xi));
    }
  }
  return q;
}

double tail_sup(const GridFunction& f, double y) {
  if (!f.interval().truncation_of_line)
    throw std::domain_error("tail_sup: interval is not a truncation of the line");
  if (y < 0.0) throw std::invalid_argument("tail_sup: y must be >= 0");
  double m = 0.0;
  for (int j = 0; j < f.n_nodes(); ++j) {
    if (std::abs(f.node(j)) > y)
      for (int l = 0; l < f.dim(); ++l) m = std::max(m, std::abs(f.value(j, l)));
  }
  return m;
}

GridFunction mean_estimate(std::span<const GridFunction> slice) {
  if (slice.empty()) throw std::invalid_argument("mean_estimate: empty slice");
  GridFunction acc = slice[0];
  for (size_t i = 1; i < slice.size(); ++i) {
    if (!acc.same_grid(slice[i]))
      throw std::invalid_argument("mean_estimate: grid mismatch");
    acc += slice[i];
  }
  acc *= 1.0 / static_cast<double>(slice.size());
  return acc;
}

nlohmann::json GridFunction::to_json() const {
  nlohmann::json vals = nlohmann::json::array();
  for (int j = 0; j < n_nodes_; ++j) {
    nlohmann::json row = nlohmann::json::array();
    for (int l = 0; l < d_; ++l) row.push_back(value(j, l));
    vals.push_back(std::move(row));
  }
  return nlohmann::json{{"lower", interval_.lower},
                        {"upper", interval_.upper},
                        {"line_truncation", interval_.truncation_of_line},
                        {"d", d_},
                        {"values", std::move(vals)}};
}

GridFunction GridFunction::from_json(const nlohmann::json& j) {
  Interval iv{j.at("lower").get<double>(), j.at("upper").get<double>(),
              j.value("line_truncation", false)};
  const int d = j.value("d", 1);
  const auto& vals = j.at("values");
  const int n = static_cast<int>(vals.size());
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(n) * d);
  for (const auto& row : vals) {
    if (static_cast<int>(row.size()) != d)
      throw std::invalid_argument("GridFunction::from_json: row width != d");
    for (const auto& v : row) flat.push_back(v.get<double>());
  }
  return GridFunction(iv, n, d, std::move(flat));
}

}  // namespace fts
