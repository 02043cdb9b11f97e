#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fts/cov_matrix.hpp"
#include "fts/empirical_measure.hpp"

namespace fts {

/// Symmetric PSD square root via eigendecomposition; negative eigenvalues
/// (roundoff) are clamped to zero.
CovMatrix psd_sqrt(const CovMatrix& s);

/// 2-Wasserstein distance between centered Gaussians:
///   sqrt( Tr[S1 + S2 - 2 (S1^{1/2} S2 S1^{1/2})^{1/2}] ).
/// The trace argument is clamped at zero against roundoff; values below
/// -1e-6 * trace scale raise instead of clamping silently.
double wasserstein2_gaussian(const CovMatrix& s1, const CovMatrix& s2);

/// Covariance with divisor n (population form; single samples allowed).
CovMatrix empirical_cov(std::span<const Eigen::VectorXd> samples);

/// Trace norm (sum of singular values) of a symmetric matrix.
double trace_norm(const Eigen::MatrixXd& m);

/// Exact q-Wasserstein distance between discrete measures via min-cost flow
/// on the bipartite atom graph. Guarded by an atom-count cap of 512.
double wasserstein_q_discrete(const EmpiricalMeasure& p1, const EmpiricalMeasure& p2,
                              double q, GroundNorm norm = GroundNorm::euclidean);

/// Returns (prokhorov, wasserstein_q) computed under the same ground norm;
/// the caller asserts pi^2 <= w.
std::pair<double, double> prokhorov_w2_bound_check(
    const EmpiricalMeasure& p1, const EmpiricalMeasure& p2, double q,
    GroundNorm norm = GroundNorm::euclidean);

}  // namespace fts
