#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fts/grid_function.hpp"
#include "fts/rng.hpp"

using namespace fts;

namespace {

GridFunction make_linear(Interval iv, int n_nodes) {
  GridFunction f(iv, n_nodes, 1);
  for (int j = 0; j < n_nodes; ++j) f.value(j) = f.node(j);
  return f;
}

GridFunction random_function(Interval iv, int n_nodes, int d, Rng& rng) {
  GridFunction f(iv, n_nodes, d);
  for (int j = 0; j < n_nodes; ++j)
    for (int l = 0; l < d; ++l) f.value(j, l) = rng.normal();
  return f;
}

}  // namespace

TEST_CASE("interval validation") {
  CHECK_THROWS(Interval{1.0, 0.0}.validate());
  CHECK_THROWS(Interval{0.0, std::numeric_limits<double>::infinity()}.validate());
  Interval ok{-2.0, 3.0, true};
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("sup_norm basics") {
  Interval iv{0.0, 1.0};
  GridFunction zero(iv, 11, 1);
  CHECK(sup_norm(zero) == 0.0);

  GridFunction c2(iv, 5, 2);
  for (int j = 0; j < 5; ++j) {
    c2.value(j, 0) = 3.0;
    c2.value(j, 1) = -5.0;
  }
  CHECK(sup_norm(c2) == 5.0);

  GridFunction lin = make_linear(Interval{-2.0, 1.0}, 101);
  CHECK(sup_norm(lin) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("sup_norm is a norm on grid-aligned functions") {
  Rng rng(42);
  Interval iv{0.0, 2.0};
  for (int rep = 0; rep < 50; ++rep) {
    GridFunction f = random_function(iv, 17, 2, rng);
    GridFunction g = random_function(iv, 17, 2, rng);
    const double s = rng.normal();
    GridFunction sf = s * f;
    CHECK(sup_norm(sf) == doctest::Approx(std::abs(s) * sup_norm(f)).epsilon(1e-12));
    CHECK(sup_norm(f + g) <= sup_norm(f) + sup_norm(g) + 1e-12);
  }
}

TEST_CASE("evaluation: interpolation, truncation, domain errors") {
  GridFunction lin = make_linear(Interval{0.0, 1.0}, 11);
  CHECK(lin.eval1(0.35) == doctest::Approx(0.35).epsilon(1e-14));
  CHECK(lin.eval1(0.3) == doctest::Approx(0.3).epsilon(1e-14));  // node hit
  CHECK_THROWS_AS((void)lin.eval1(1.5), std::domain_error);

  GridFunction trunc = make_linear(Interval{0.0, 1.0, true}, 11);
  CHECK(trunc.eval1(1.5) == 0.0);
  CHECK(trunc.eval1(-0.1) == 0.0);
}

TEST_CASE("restrict: identity and constants") {
  Rng rng(7);
  GridFunction f = random_function(Interval{0.0, 1.0}, 21, 1, rng);
  GridFunction same = restrict_to(f, f.interval());
  REQUIRE(same.n_nodes() == f.n_nodes());
  for (int j = 0; j < f.n_nodes(); ++j) CHECK(same.value(j) == f.value(j));

  GridFunction c(Interval{0.0, 1.0}, 11, 1);
  for (int j = 0; j < 11; ++j) c.value(j) = 2.0;
  GridFunction r = restrict_to(c, Interval{0.2, 0.7});
  for (int j = 0; j < r.n_nodes(); ++j) CHECK(r.value(j) == doctest::Approx(2.0));

  CHECK_THROWS(restrict_to(c, Interval{-0.5, 0.5}));
}

TEST_CASE("restrict reproduces affine functions: dense-evaluation oracle") {
  GridFunction lin = make_linear(Interval{0.0, 1.0}, 101);
  GridFunction r = restrict_to(lin, Interval{0.25, 0.75});
  CHECK(r.n_nodes() == 51);
  // Oracle: dense analytic evaluation of the identity map.
  double max_err = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double u = 0.25 + 0.5 * i / 1000.0;
    max_err = std::max(max_err, std::abs(r.eval1(u) - u));
  }
  CHECK(max_err <= 1e-12);
}

TEST_CASE("restrict twice equals restrict to the inner interval") {
  Rng rng(11);
  GridFunction f = random_function(Interval{0.0, 1.0}, 101, 1, rng);
  GridFunction outer = restrict_to(f, Interval{0.2, 0.8});
  GridFunction nested = restrict_to(outer, Interval{0.3, 0.7});
  GridFunction direct = restrict_to(f, Interval{0.3, 0.7});
  REQUIRE(nested.n_nodes() == direct.n_nodes());
  for (int j = 0; j < nested.n_nodes(); ++j)
    CHECK(nested.value(j) == doctest::Approx(direct.value(j)).epsilon(1e-12));
}

TEST_CASE("holder_quotient") {
  GridFunction c(Interval{0.0, 1.0}, 11, 1);
  CHECK(holder_quotient(c, 0.7) == 0.0);

  GridFunction lin = make_linear(Interval{0.0, 1.0}, 11);
  CHECK(holder_quotient(lin, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  // Oracle: exhaustive pair scan; |u-v|^{1-xi} peaks at the farthest pair
  // for the identity map.
  const double xi = 0.6;
  double oracle = 0.0;
  for (int i = 0; i < 11; ++i)
    for (int j = i + 1; j < 11; ++j) {
      const double dist = (j - i) * 0.1;
      oracle = std::max(oracle, dist / std::pow(dist, xi));
    }
  CHECK(oracle == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(holder_quotient(lin, xi) == doctest::Approx(oracle).epsilon(1e-12));

  CHECK_THROWS(holder_quotient(lin, 0.0));
  CHECK_THROWS(holder_quotient(lin, 1.5));
}

TEST_CASE("holder_quotient bounds adjacent increments") {
  Rng rng(3);
  GridFunction f = random_function(Interval{0.0, 1.0}, 31, 1, rng);
  const double xi = 0.8;
  const double q = holder_quotient(f, xi);
  double max_inc = 0.0;
  for (int j = 0; j + 1 < f.n_nodes(); ++j)
    max_inc = std::max(max_inc, std::abs(f.value(j + 1) - f.value(j)));
  CHECK(q * std::pow(f.mesh(), xi) >= max_inc - 1e-12);
}

TEST_CASE("tail_sup") {
  GridFunction zero(Interval{-5.0, 5.0, true}, 101, 1);
  CHECK(tail_sup(zero, 0.0) == 0.0);
  CHECK(tail_sup(zero, 10.0) == 0.0);  // empty tail

  GridFunction bump(Interval{-10.0, 10.0, true}, 2001, 1);
  for (int j = 0; j < bump.n_nodes(); ++j)
    bump.value(j) = std::exp(-bump.node(j) * bump.node(j));
  // Dense-grid oracle: the tail sup of exp(-u^2) beyond y = 3 sits at the
  // boundary node just past y.
  CHECK(tail_sup(bump, 3.0) <= std::exp(-9.0) + 1e-6);
  CHECK(tail_sup(bump, 3.0) > 0.0);

  double prev = tail_sup(bump, 0.0);
  for (double y : {0.5, 1.0, 2.0, 4.0, 9.0, 11.0}) {
    const double cur = tail_sup(bump, y);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }

  GridFunction compact(Interval{0.0, 1.0}, 11, 1);
  CHECK_THROWS_AS((void)tail_sup(compact, 0.5), std::domain_error);
}

TEST_CASE("arithmetic aligns mismatched node counts onto the finer grid") {
  GridFunction coarse = make_linear(Interval{0.0, 1.0}, 6);
  GridFunction fine = make_linear(Interval{0.0, 1.0}, 11);
  GridFunction sum = coarse + fine;
  CHECK(sum.n_nodes() == 11);
  for (int j = 0; j < 11; ++j)
    CHECK(sum.value(j) == doctest::Approx(2.0 * sum.node(j)).epsilon(1e-12));

  GridFunction other(Interval{0.0, 2.0}, 11, 1);
  CHECK_THROWS(coarse + other);
}

TEST_CASE("json round trip") {
  Rng rng(5);
  GridFunction f = random_function(Interval{-1.0, 4.0, true}, 13, 3, rng);
  GridFunction g = GridFunction::from_json(f.to_json());
  CHECK(g.same_grid(f));
  for (int j = 0; j < f.n_nodes(); ++j)
    for (int l = 0; l < 3; ++l) CHECK(g.value(j, l) == f.value(j, l));
  auto j = f.to_json();
  CHECK(j.contains("lower"));
  CHECK(j.contains("upper"));
  CHECK(j.contains("line_truncation"));
  CHECK(j.contains("d"));
  CHECK(j.contains("values"));
}

TEST_CASE("diagnostics config validation") {
  CHECK_THROWS(DiagnosticsConfig{0.5, 1.0}.validate());
  CHECK_THROWS(DiagnosticsConfig{0.7, 0.0}.validate());
  CHECK_NOTHROW(DiagnosticsConfig{0.7, 2.0}.validate());
}

TEST_CASE("mean_estimate") {
  Rng rng(9);
  GridFunction f = random_function(Interval{0.0, 1.0}, 15, 1, rng);
  std::vector<GridFunction> one{f};
  GridFunction m = mean_estimate(one);
  for (int j = 0; j < 15; ++j) CHECK(m.value(j) == f.value(j));

  std::vector<GridFunction> pair{f, -1.0 * f};
  GridFunction z = mean_estimate(pair);
  CHECK(sup_norm(z) == 0.0);

  CHECK_THROWS(mean_estimate(std::span<const GridFunction>{}));
}
