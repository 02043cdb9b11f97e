#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "fts/cov_kernel.hpp"
#include "fts/partial_sum.hpp"

namespace fts {

/// Factor a symmetric PSD matrix as L L^T. Tries Cholesky with an escalating
/// diagonal jitter (eps * trace/dim for eps in {0, 1e-12, 1e-10, 1e-8}), then
/// falls back to an eigendecomposition with clamped eigenvalues; discretized
/// kernels are routinely rank-deficient.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& s);

/// Sample one Brownian motion path with covariance kernel c on the given
/// increasing lambda grid (starting at 0): W(0) = 0 and
/// W(l_{j+1}) = W(l_j) + sqrt(l_{j+1} - l_j) * L z_j with z_j iid standard
/// normal and L L^T the factorization of the kernel matrix.
PartialSumField sample_brownian(const CovKernel& c, std::span<const double> lambda_grid,
                                uint64_t seed);

/// Same, with a precomputed factor (shared read-only across replications).
PartialSumField sample_brownian_with_factor(const CovKernel& c,
                                            const Eigen::MatrixXd& factor,
                                            std::span<const double> lambda_grid,
                                            uint64_t seed);

/// Empirical upper-alpha quantile of sup over the lambda grid
/// {0, 1/resolution, ..., 1} and the kernel's u grid of |W(lambda, u)|,
/// estimated from n_rep independent paths. Deterministic given the seed.
double sup_quantile(const CovKernel& c, double alpha, int n_rep,
                    int lambda_resolution, uint64_t seed);

}  // namespace fts
