#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "fts/partial_sum.hpp"

namespace fts {

/// Evenly spaced grid on [0,1] x [-N^rho, N^rho] with mesh condition: every
/// point of the product domain is within N^(-sigma_mesh) (max-distance) of a
/// gridpoint, and total_points <= c_count * N^(rho + 2 sigma_mesh).
struct DiscretizationGrid {
  int N = 1;
  double rho = 0.1;
  double sigma_mesh = 0.4;
  double c_count = 8.0;
  double u_bound = 1.0;  // N^rho
  std::vector<double> lambda_points;
  std::vector<double> u_points;

  int total_points() const {
    return static_cast<int>(lambda_points.size() * u_points.size());
  }

  /// Index pair of the closest gridpoint in max-distance; ties resolved to
  /// the smaller lambda, then the smaller u.
  std::pair<int, int> nearest(double lambda, double u) const;
};

DiscretizationGrid make_grid(int N, double rho, double sigma_mesh,
                             double c_count = 8.0);

/// A field projected onto a DiscretizationGrid: gridpoint values inside the
/// truncation window, implicitly zero for |u| > N^rho. Queries between
/// gridpoints snap to the nearest gridpoint.
struct DiscretizedField {
  DiscretizationGrid grid;
  int d = 1;
  Eigen::MatrixXd values;  // total_points x d, lambda-major rows

  double eval(double lambda, double u, int comp = 0) const;
};

/// Discretize a scalar field given as a callable (lambda, u) -> value.
DiscretizedField discretize(const std::function<double(double, double)>& f,
                            const DiscretizationGrid& grid);

enum class FieldEval { step, linear };

/// Discretize a partial-sum field (or Brownian sample) on the grid.
DiscretizedField discretize(const PartialSumField& f, const DiscretizationGrid& grid,
                            FieldEval mode = FieldEval::step);

/// Canonical vectorization: lambda-major, then u, then component. The
/// max-norm of the vector equals the sup of |f^dis| over gridpoints.
Eigen::VectorXd vectorize(const DiscretizedField& f);

}  // namespace fts
