#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "fts/interval.hpp"

namespace fts {

/// A continuous function on an interval, represented by its values on a
/// uniform grid of `n_nodes` points and evaluated between nodes by linear
/// interpolation. Multivariate codomains (d > 1) store node values
/// row-major: node index first, then component.
///
/// Immutable by convention after construction; all operations below are pure.
class GridFunction {
 public:
  GridFunction() = default;

  /// Zero function.
  GridFunction(Interval iv, int n_nodes, int d = 1);

  GridFunction(Interval iv, int n_nodes, int d, std::vector<double> values);

  const Interval& interval() const { return interval_; }
  int n_nodes() const { return n_nodes_; }
  int dim() const { return d_; }
  double mesh() const { return interval_.length() / (n_nodes_ - 1); }
  double node(int j) const {
    return interval_.lower + j * interval_.length() / (n_nodes_ - 1);
  }

  double value(int node, int comp = 0) const { return values_[node * d_ + comp]; }
  double& value(int node, int comp = 0) { return values_[node * d_ + comp]; }
  std::span<const double> values() const { return values_; }

  bool same_grid(const GridFunction& o) const {
    return interval_ == o.interval_ && n_nodes_ == o.n_nodes_ && d_ == o.d_;
  }

  /// Linear interpolation; exact at nodes. Outside the interval: zero when
  /// the interval truncates the line, error otherwise.
  Eigen::VectorXd eval(double u) const;
  /// Scalar fast path (d == 1).
  double eval1(double u) const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double s);

  nlohmann::json to_json() const;
  static GridFunction from_json(const nlohmann::json& j);

 private:
  Interval interval_;
  int n_nodes_ = 0;
  int d_ = 1;
  std::vector<double> values_;

  void check_finite() const;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double s, GridFunction f);

/// Maximum of |value| over grid nodes and components; exact for the
/// piecewise-linear representation.
double sup_norm(const GridFunction& f);

/// Resample onto a uniform grid over `sub` with the same node density.
GridFunction restrict_to(const GridFunction& f, const Interval& sub);

/// max over node pairs u != v of |f(u)-f(v)| / |u-v|^xi.
double holder_quotient(const GridFunction& f, double xi);

/// sup of |f(u)| over grid nodes with |u| > y (0 if no such node). Only
/// defined for line-truncation intervals.
double tail_sup(const GridFunction& f, double y);

/// Bring two functions defined on the same interval onto a shared grid (the
/// finer of the two node counts). Throws on interval or dimension mismatch.
std::pair<GridFunction, GridFunction> align(const GridFunction& a,
                                            const GridFunction& b);

/// Pointwise average of a non-empty slice sharing one grid.
GridFunction mean_estimate(std::span<const GridFunction> slice);

}  // namespace fts
