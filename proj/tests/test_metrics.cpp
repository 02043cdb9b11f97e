#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "fts/empirical_measure.hpp"
#include "fts/prokhorov.hpp"
#include "fts/rng.hpp"
#include "fts/wasserstein.hpp"

using namespace fts;

namespace {

// ---------------------------------------------------------------------------
// Independent oracle: direct evaluation of the set-based Prokhorov definition
//   pi = inf { chi > 0 : P1(A) <= P2(A^chi) + chi and P2(A) <= P1(A^chi) + chi
//              for all A }
// by enumerating every subset A of each support (2^k sets). The infimum is
// attained at a pairwise distance or at a subset deficit, so scanning those
// candidates with the closed-neighborhood feasibility test is exact.
// ---------------------------------------------------------------------------

double measure_of_closed_neighborhood(const EmpiricalMeasure& m,
                                      const std::vector<Eigen::VectorXd>& set_atoms,
                                      double chi, GroundNorm norm) {
  double mass = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    for (const auto& a : set_atoms) {
      if (ground_distance(m.atoms[i], a, norm) <= chi) {
        mass += m.weights[i];
        break;
      }
    }
  }
  return mass;
}

bool closed_feasible(const EmpiricalMeasure& p1, const EmpiricalMeasure& p2,
                     double chi, GroundNorm norm) {
  auto one_side = [&](const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    const int n = a.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      double pa = 0.0;
      std::vector<Eigen::VectorXd> set_atoms;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) {
          pa += a.weights[i];
          set_atoms.push_back(a.atoms[i]);
        }
      const double pb = measure_of_closed_neighborhood(b, set_atoms, chi, norm);
      if (pa > pb + chi + 1e-15) return false;
    }
    return true;
  };
  return one_side(p1, p2) && one_side(p2, p1);
}

double prokhorov_oracle(const EmpiricalMeasure& p1, const EmpiricalMeasure& p2,
                        GroundNorm norm) {
  std::vector<double> candidates{0.0, 1.0};
  std::vector<double> distances;
  for (int i = 0; i < p1.size(); ++i)
    for (int j = 0; j < p2.size(); ++j)
      distances.push_back(ground_distance(p1.atoms[i], p2.atoms[j], norm));
  std::sort(distances.begin(), distances.end());
  for (double t : distances) candidates.push_back(t);
  // Subset deficits at every distance level, both directions.
  auto add_deficits = [&](const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    const int n = a.size();
    for (double t : distances) {
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        double pa = 0.0;
        std::vector<Eigen::VectorXd> set_atoms;
        for (int i = 0; i < n; ++i)
          if (mask & (1u << i)) {
            pa += a.weights[i];
            set_atoms.push_back(a.atoms[i]);
          }
        const double pb = measure_of_closed_neighborhood(b, set_atoms, t, norm);
        if (pa - pb > 0.0) candidates.push_back(pa - pb);
      }
    }
  };
  add_deficits(p1, p2);
  add_deficits(p2, p1);
  std::sort(candidates.begin(), candidates.end());
  for (double chi : candidates)
    if (chi >= 0.0 && closed_feasible(p1, p2, chi, norm)) return chi;
  return 1.0;
}

EmpiricalMeasure random_measure(int max_atoms, int dim, Rng& rng) {
  const int n = rng.uniform_int(1, max_atoms);
  EmpiricalMeasure m;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd a(dim);
    for (int k = 0; k < dim; ++k) a[k] = rng.normal();
    m.atoms.push_back(std::move(a));
    const double w = 0.05 + rng.uniform();
    m.weights.push_back(w);
    total += w;
  }
  for (double& w : m.weights) w /= total;
  // Renormalize exactly.
  double s = 0.0;
  for (size_t i = 0; i + 1 < m.weights.size(); ++i) s += m.weights[i];
  m.weights.back() = 1.0 - s;
  m.validate();
  return m;
}

Eigen::MatrixXd random_psd(int dim, Rng& rng) {
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = rng.normal();
  return a * a.transpose() / dim;
}

Eigen::VectorXd dirac(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("prokhorov: trivial and two-point examples") {
  EmpiricalMeasure p1, p2;
  p1.atoms = {dirac({0.0, 0.0})};
  p1.weights = {1.0};
  p2 = p1;
  CHECK(prokhorov_discrete(p1, p2) == doctest::Approx(0.0).epsilon(1e-12));

  // Diracs at distance 0.3: pi = min(d, 1) = 0.3; oracle enumerates all
  // subsets of the two-point support.
  EmpiricalMeasure q2;
  q2.atoms = {dirac({0.3, 0.0})};
  q2.weights = {1.0};
  CHECK(prokhorov_discrete(p1, q2, GroundNorm::max) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(prokhorov_oracle(p1, q2, GroundNorm::max) == doctest::Approx(0.3).epsilon(1e-12));

  // Diracs far apart cap at 1.
  EmpiricalMeasure far;
  far.atoms = {dirac({5.0, 0.0})};
  far.weights = {1.0};
  CHECK(prokhorov_discrete(p1, far) == doctest::Approx(1.0).epsilon(1e-12));

  // Dirac at 0 vs (1/2 at 0, 1/2 at distance >= 1) -> 0.5.
  EmpiricalMeasure split;
  split.atoms = {dirac({0.0, 0.0}), dirac({2.0, 0.0})};
  split.weights = {0.5, 0.5};
  CHECK(prokhorov_discrete(p1, split) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prokhorov_oracle(p1, split, GroundNorm::max) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("prokhorov matches the set-based oracle on small random instances") {
  Rng rng(2024);
  for (int rep = 0; rep < 200; ++rep) {
    const int dim = rng.uniform_int(1, 3);
    EmpiricalMeasure a = random_measure(4, dim, rng);
    EmpiricalMeasure b = random_measure(4, dim, rng);
    for (GroundNorm norm : {GroundNorm::max, GroundNorm::euclidean}) {
      const double fast = prokhorov_discrete(a, b, norm);
      const double slow = prokhorov_oracle(a, b, norm);
      CHECK(std::abs(fast - slow) <= 1e-9);
    }
  }
}

TEST_CASE("prokhorov: metric properties on random instances") {
  Rng rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    EmpiricalMeasure a = random_measure(6, 2, rng);
    EmpiricalMeasure b = random_measure(6, 2, rng);
    EmpiricalMeasure c = random_measure(6, 2, rng);
    const double ab = prokhorov_discrete(a, b);
    const double ba = prokhorov_discrete(b, a);
    const double ac = prokhorov_discrete(a, c);
    const double cb = prokhorov_discrete(c, b);
    CHECK(std::abs(ab - ba) <= 1e-9);           // symmetry
    CHECK(ab <= ac + cb + 1e-9);                // triangle inequality
    CHECK(ab <= 1.0 + 1e-12);                   // pi <= 1
    CHECK(prokhorov_discrete(a, a) <= 1e-12);   // identity
  }
}

TEST_CASE("wasserstein2_gaussian: closed-form oracles") {
  // S1 = S2 -> 0.
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(3, 3) * 2.0;
  CHECK(wasserstein2_gaussian(CovMatrix(s), CovMatrix(s)) ==
        doctest::Approx(0.0).epsilon(1e-10));

  // 1-D: W2 = |sigma1 - sigma2|.
  Eigen::MatrixXd v1(1, 1), v2(1, 1);
  v1 << 1.0;
  v2 << 4.0;
  CHECK(wasserstein2_gaussian(CovMatrix(v1), CovMatrix(v2)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Commuting diagonals: sqrt(sum (sqrt(l1) - sqrt(l2))^2).
  Eigen::MatrixXd d1 = Eigen::Vector2d(1.0, 4.0).asDiagonal();
  Eigen::MatrixXd d2 = Eigen::Vector2d(4.0, 1.0).asDiagonal();
  CHECK(wasserstein2_gaussian(CovMatrix(d1), CovMatrix(d2)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("wasserstein2_gaussian: symmetry, identity, scaling") {
  Rng rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const int dim = rng.uniform_int(1, 8);
    CovMatrix a(random_psd(dim, rng)), b(random_psd(dim, rng));
    const double w_ab = wasserstein2_gaussian(a, b);
    const double w_ba = wasserstein2_gaussian(b, a);
    CHECK(w_ab == doctest::Approx(w_ba).epsilon(1e-7));
    CHECK(w_ab >= 0.0);
    CHECK(wasserstein2_gaussian(a, a) <= 1e-6 * (1.0 + a.m.trace()));
    // W2(sA, sB) = sqrt(s) W2(A, B).
    const double s = 4.0;
    CovMatrix sa(s * a.m), sb(s * b.m);
    CHECK(wasserstein2_gaussian(sa, sb) ==
          doctest::Approx(std::sqrt(s) * w_ab).epsilon(1e-7));
  }
}

TEST_CASE("psd_sqrt") {
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  CHECK((psd_sqrt(CovMatrix(id)).m - id).cwiseAbs().maxCoeff() <= 1e-12);

  Eigen::MatrixXd d = Eigen::Vector2d(4.0, 9.0).asDiagonal();
  Eigen::MatrixXd expected = Eigen::Vector2d(2.0, 3.0).asDiagonal();
  CHECK((psd_sqrt(CovMatrix(d)).m - expected).cwiseAbs().maxCoeff() <= 1e-12);

  Rng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    CovMatrix s(random_psd(20, rng));
    CovMatrix r = psd_sqrt(s);
    const double rel = (r.m * r.m - s.m).norm() / s.m.norm();
    CHECK(rel <= 1e-8);
  }
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS(psd_sqrt(CovMatrix(asym)));
}

TEST_CASE("powers-stormer root proximity on random PSD pairs") {
  Rng rng(555);
  for (int rep = 0; rep < 100; ++rep) {
    const int dim = rng.uniform_int(1, 32);
    CovMatrix a(random_psd(dim, rng)), b(random_psd(dim, rng));
    const double lhs = (psd_sqrt(a).m - psd_sqrt(b).m).squaredNorm();
    const double rhs = trace_norm(a.m - b.m);
    CHECK(lhs <= rhs + 1e-8);
  }
}

TEST_CASE("empirical_cov") {
  std::vector<Eigen::VectorXd> same(3, dirac({1.0, 2.0}));
  CHECK(empirical_cov(same).m.cwiseAbs().maxCoeff() == 0.0);

  std::vector<Eigen::VectorXd> two{dirac({1.0, 0.0}), dirac({-1.0, 0.0})};
  Eigen::MatrixXd expected = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  CHECK((empirical_cov(two).m - expected).cwiseAbs().maxCoeff() <= 1e-15);

  CHECK_THROWS(empirical_cov(std::span<const Eigen::VectorXd>{}));

  // Monte Carlo: 100000 draws from N(0, S); entrywise error within 5 MC SE.
  Rng rng(77);
  Eigen::MatrixXd s = random_psd(3, rng);
  Eigen::LLT<Eigen::MatrixXd> llt(s + 1e-12 * Eigen::MatrixXd::Identity(3, 3));
  Eigen::MatrixXd l = llt.matrixL();
  const int n = 100000;
  std::vector<Eigen::VectorXd> draws(n);
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d z(rng.normal(), rng.normal(), rng.normal());
    draws[i] = l * z;
  }
  CovMatrix hat = empirical_cov(draws);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // Var of the (i,j) product estimate for Gaussians.
      const double var_prod = s(i, i) * s(j, j) + s(i, j) * s(i, j);
      const double se = std::sqrt(var_prod / n);
      CHECK(std::abs(hat.m(i, j) - s(i, j)) <= 5.0 * se);
    }
  }
}

TEST_CASE("wasserstein_q_discrete: Dirac and blended oracles") {
  EmpiricalMeasure a, b;
  a.atoms = {dirac({0.0, 0.0})};
  a.weights = {1.0};
  b.atoms = {dirac({0.3, 0.0})};
  b.weights = {1.0};
  // Dirac pair: W_q = distance for every q.
  CHECK(wasserstein_q_discrete(a, b, 1.0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(wasserstein_q_discrete(a, b, 2.0) == doctest::Approx(0.3).epsilon(1e-12));

  // Split target: W2^2 = 0.5 * 0^2 + 0.5 * 1^2.
  EmpiricalMeasure split;
  split.atoms = {dirac({0.0, 0.0}), dirac({1.0, 0.0})};
  split.weights = {0.5, 0.5};
  CHECK(wasserstein_q_discrete(a, split, 2.0) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));

  CHECK(wasserstein_q_discrete(a, a, 2.0) <= 1e-12);
  CHECK_THROWS(wasserstein_q_discrete(a, b, 0.5));
}

TEST_CASE("wasserstein_q_discrete: 1-D sorted-coupling oracle") {
  // In one dimension the optimal coupling of equal-weight atom sets is the
  // monotone (sorted) pairing.
  Rng rng(404);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = rng.uniform_int(2, 12);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = rng.normal();
      ys[i] = rng.normal();
    }
    EmpiricalMeasure a, b;
    for (int i = 0; i < n; ++i) {
      a.atoms.push_back(dirac({xs[i]}));
      b.atoms.push_back(dirac({ys[i]}));
      a.weights.push_back(1.0 / n);
      b.weights.push_back(1.0 / n);
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    double expected_sq = 0.0;
    for (int i = 0; i < n; ++i)
      expected_sq += (xs[i] - ys[i]) * (xs[i] - ys[i]) / n;
    CHECK(wasserstein_q_discrete(a, b, 2.0) ==
          doctest::Approx(std::sqrt(expected_sq)).epsilon(1e-8));
  }
}

TEST_CASE("prokhorov^2 <= W_q bound") {
  EmpiricalMeasure a, b;
  a.atoms = {dirac({0.0, 0.0})};
  a.weights = {1.0};
  b.atoms = {dirac({0.3, 0.0})};
  b.weights = {1.0};
  auto [pi, w] = prokhorov_w2_bound_check(a, b, 2.0);
  CHECK(pi == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(w == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(pi * pi <= w + 1e-9);

  Rng rng(321);
  for (int rep = 0; rep < 50; ++rep) {
    EmpiricalMeasure p = random_measure(5, 3, rng);
    EmpiricalMeasure q = random_measure(5, 3, rng);
    auto [pp, ww] = prokhorov_w2_bound_check(p, q, 2.0);
    CHECK(pp * pp <= ww + 1e-9);
    auto [p1, w1] = prokhorov_w2_bound_check(p, q, 1.0);
    CHECK(p1 * p1 <= w1 + 1e-9);
  }
}

TEST_CASE("measure validation") {
  EmpiricalMeasure bad;
  bad.atoms = {dirac({0.0})};
  bad.weights = {0.5};
  CHECK_THROWS(bad.validate());
  bad.weights = {1.0};
  CHECK_NOTHROW(bad.validate());
  EmpiricalMeasure other;
  other.atoms = {dirac({0.0, 1.0})};
  other.weights = {1.0};
  CHECK_THROWS(prokhorov_discrete(bad, other));
}
