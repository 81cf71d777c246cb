#include <doctest.h>

#include <cmath>
#include <vector>

#include "kgeom/models.hpp"
#include "kgeom/rng.hpp"

using namespace kgeom;

namespace {

std::vector<cd> sample(const KahlerChart& chart, std::uint64_t seed, std::size_t index) {
  Rng rng = substream(seed, {index});
  return chart.sampler(index, rng);
}

VectorXcd random_dir(Rng& rng, int n) {
  VectorXcd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.complex_normal();
  return x;
}

}  // namespace

TEST_CASE("metric examples") {
  auto disc = models::poincare_disc();
  const std::vector<cd> center = {cd(0.0, 0.0)};
  CHECK(std::abs(metric_at(disc, center)(0, 0) - cd(1.0, 0.0)) < 1e-15);

  const std::vector<cd> p = {cd(0.3, 0.4)};  // |p|^2 = 0.25
  CHECK(std::abs(metric_at(disc, p)(0, 0) - cd(16.0 / 9.0, 0.0)) < 1e-13);

  auto plane = models::flat(2);
  const std::vector<cd> q = {cd(0.7, -0.1), cd(0.2, 0.5)};
  CHECK(max_abs(metric_at(plane, q) - MatrixXcd::Identity(2, 2)) < 1e-15);
}

TEST_CASE("metric_at raises on invalid charts and points") {
  KahlerChart bad;
  bad.m = 1;
  bad.potential = PolarizedExpr(1, neg(mul(zvar(0), wvar(0))));  // -|z|^2
  CHECK_THROWS_AS(metric_at(bad, std::vector<cd>{cd(0.0, 0.0)}), NotPositiveDefinite);

  auto disc = models::poincare_disc();
  CHECK_THROWS_AS(metric_at(disc, std::vector<cd>{cd(1.5, 0.0)}), DomainError);
}

TEST_CASE("curvature components of the model charts") {
  auto disc = models::poincare_disc();
  const auto t1 = curvature_at(disc, std::vector<cd>{cd(0.0, 0.0)});
  CHECK(std::abs(t1.at(0, 0, 0, 0) - cd(-2.0, 0.0)) < 1e-14);

  auto plane = models::flat(2);
  const auto t0 = curvature_at(plane, std::vector<cd>{cd(0.4, 0.1), cd(-0.2, 0.3)});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) CHECK(std::abs(t0.at(i, j, k, l)) < 1e-14);

  auto ball2 = models::complex_hyperbolic(2, 1.0);
  const auto t2 = curvature_at(ball2, std::vector<cd>{cd(0.0, 0.0), cd(0.0, 0.0)});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const double expected = -((i == j && k == l ? 1.0 : 0.0) +
                                    (i == l && k == j ? 1.0 : 0.0));
          CHECK(std::abs(t2.at(i, j, k, l) - cd(expected, 0.0)) < 1e-14);
        }
}

TEST_CASE("Q on model tensors") {
  auto disc = models::poincare_disc();
  const auto t1 = curvature_at(disc, std::vector<cd>{cd(0.0, 0.0)});
  CHECK(Q(t1, HoloDirection{VectorXcd::Ones(1)}) == doctest::Approx(-2.0).epsilon(1e-12));

  auto ball2 = models::complex_hyperbolic(2, 1.0);
  const auto t2 = curvature_at(ball2, std::vector<cd>{cd(0.0, 0.0), cd(0.0, 0.0)});
  CHECK(Q(t2, HoloDirection{VectorXcd::Ones(2)}) == doctest::Approx(-8.0).epsilon(1e-12));

  // |lambda|^4 homogeneity
  Rng rng(4);
  const VectorXcd x = random_dir(rng, 2);
  const cd lambda(0.3, -1.2);
  CHECK(Q(t2, HoloDirection{lambda * x}) ==
        doctest::Approx(std::pow(std::abs(lambda), 4.0) * Q(t2, HoloDirection{x}))
            .epsilon(1e-10));
}

TEST_CASE("hsc on the reference charts") {
  Rng rng(5);
  auto gom = models::g_omega(2);
  auto p = sample(gom, 1, 0);
  CHECK(hsc(gom, p, HoloDirection{random_dir(rng, 2)}) ==
        doctest::Approx(-1.0).epsilon(1e-11));

  auto disc = models::poincare_disc();
  auto q = sample(disc, 2, 0);
  CHECK(hsc(disc, q, HoloDirection{random_dir(rng, 1)}) ==
        doctest::Approx(-2.0).epsilon(1e-11));

  auto plane = models::flat(2);
  CHECK(std::abs(hsc(plane, std::vector<cd>{cd(0.2, 0.0), cd(0.0, 0.4)},
                     HoloDirection{random_dir(rng, 2)})) < 1e-12);

  // scale invariance in the direction
  auto pb = models::perturbed_ball(2, 0.03, 7);
  auto r = sample(pb, 3, 0);
  const auto t = curvature_at(pb, r);
  const VectorXcd x = random_dir(rng, 2);
  CHECK(hsc(t, HoloDirection{x}) ==
        doctest::Approx(hsc(t, HoloDirection{cd(0.0, 2.5) * x})).epsilon(1e-10));

  CHECK_THROWS_AS(hsc(t, HoloDirection{VectorXcd::Zero(2)}), ZeroDirection);
}

TEST_CASE("bisectional on the reference charts") {
  auto ball2 = models::complex_hyperbolic(2, 1.0);
  const auto t = curvature_at(ball2, std::vector<cd>{cd(0.0, 0.0), cd(0.0, 0.0)});
  VectorXcd e1 = VectorXcd::Zero(2), e2 = VectorXcd::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  CHECK(bisectional(t, HoloDirection{e1}, HoloDirection{e2}) ==
        doctest::Approx(-1.0).epsilon(1e-12));

  // X = Y collapses to Q/|X|^4
  Rng rng(6);
  const VectorXcd x = random_dir(rng, 2);
  CHECK(bisectional(t, HoloDirection{x}, HoloDirection{x}) ==
        doctest::Approx(hsc(t, HoloDirection{x})).epsilon(1e-10));

  // symmetry in the two directions
  auto pb = models::perturbed_ball(2, 0.04, 11);
  const auto tp = curvature_at(pb, sample(pb, 4, 0));
  const VectorXcd y = random_dir(rng, 2);
  CHECK(bisectional(tp, HoloDirection{x}, HoloDirection{y}) ==
        doctest::Approx(bisectional(tp, HoloDirection{y}, HoloDirection{x}))
            .epsilon(1e-10));

  auto plane = models::flat(2);
  const auto t0 = curvature_at(plane, std::vector<cd>{cd(0.1, 0.0), cd(0.0, 0.0)});
  CHECK(std::abs(bisectional(t0, HoloDirection{x}, HoloDirection{y})) < 1e-13);
}

TEST_CASE("real sectional curvature of the model planes") {
  auto ball2 = models::complex_hyperbolic(2, 1.0);
  const auto t = curvature_at(ball2, std::vector<cd>{cd(0.0, 0.0), cd(0.0, 0.0)});
  VectorXcd e1 = VectorXcd::Zero(2), e2 = VectorXcd::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;

  // (x, Jx): holomorphic plane
  CHECK(real_sectional(t, RealTwoPlane{e1, cd(0.0, 1.0) * e1}) ==
        doctest::Approx(-2.0).epsilon(1e-10));
  // totally real plane
  CHECK(real_sectional(t, RealTwoPlane{e1, e2}) == doctest::Approx(-0.5).epsilon(1e-10));

  auto plane = models::flat(2);
  const auto t0 = curvature_at(plane, std::vector<cd>{cd(0.0, 0.0), cd(0.3, 0.2)});
  CHECK(std::abs(real_sectional(t0, RealTwoPlane{e1, e2})) < 1e-13);

  CHECK_THROWS_AS(real_sectional(t, RealTwoPlane{e1, 2.0 * e1}), DegeneratePlane);
}

TEST_CASE("sectional value is invariant under plane basis changes") {
  auto pb = models::perturbed_ball(2, 0.05, 3);
  Rng rng(9);
  const auto t = curvature_at(pb, sample(pb, 5, 0));
  const VectorXcd x = random_dir(rng, 2);
  const VectorXcd y = random_dir(rng, 2);
  const double reference = real_sectional(t, RealTwoPlane{x, y});
  for (int rep = 0; rep < 6; ++rep) {
    // real GL(2) recombination spans the same real plane
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    const double c = rng.uniform(-2.0, 2.0), d = rng.uniform(-2.0, 2.0);
    if (std::abs(a * d - b * c) < 0.1) continue;
    const RealTwoPlane recombined{a * x + b * y, c * x + d * y};
    CHECK(real_sectional(t, recombined) == doctest::Approx(reference).epsilon(1e-9));
  }
}

TEST_CASE("kappa(x, Jx) equals the holomorphic sectional curvature") {
  Rng rng(10);
  for (auto chart : {models::perturbed_ball(2, 0.05, 21), models::polydisc_like(2)}) {
    const auto t = curvature_at(chart, sample(chart, 6, 0));
    for (int rep = 0; rep < 4; ++rep) {
      const VectorXcd x = random_dir(rng, 2);
      CHECK(real_sectional(t, RealTwoPlane{x, cd(0.0, 1.0) * x}) ==
            doctest::Approx(hsc(t, HoloDirection{x})).epsilon(1e-9));
    }
  }
}

TEST_CASE("six-Q polarization equals the direct contraction") {
  Rng rng(12);
  const std::vector<KahlerChart> charts = {
      models::complex_hyperbolic(2, 1.0), models::perturbed_ball(2, 0.05, 5),
      models::polydisc_like(2), models::g_omega(3)};
  for (const auto& chart : charts) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto p = sample(chart, 7 + rep, rep);
      const auto t = curvature_at(chart, p);
      const RealTwoPlane plane{random_dir(rng, chart.m), random_dir(rng, chart.m)};
      const double direct = riemann_contraction(t, plane);
      const double six_q = riemann_contraction_six_q(t, plane);
      CHECK(std::abs(direct - six_q) <= 1e-9 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("constant-hsc law on the ball") {
  auto ball3 = models::complex_hyperbolic(3, 1.0);
  Rng rng(13);
  const auto p = sample(ball3, 8, 0);
  const auto t = curvature_at(ball3, p);
  for (int rep = 0; rep < 8; ++rep) {
    const RealTwoPlane plane{random_dir(rng, 3), random_dir(rng, 3)};
    const double kappa = real_sectional(t, plane);
    const double expected = -0.5 * (1.0 + 3.0 * cos2_alpha(t.metric(), plane));
    CHECK(kappa == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("scaling the potential scales hsc and fixes angles") {
  auto base = models::perturbed_ball(2, 0.04, 17);
  auto scaled = models::scale_potential(base, 2.5);
  Rng rng(14);
  const auto p = sample(base, 9, 0);
  const auto t1 = curvature_at(base, p);
  const auto t2 = curvature_at(scaled, p);
  for (int rep = 0; rep < 4; ++rep) {
    const VectorXcd x = random_dir(rng, 2);
    const VectorXcd y = random_dir(rng, 2);
    CHECK(hsc(t2, HoloDirection{x}) ==
          doctest::Approx(hsc(t1, HoloDirection{x}) / 2.5).epsilon(1e-10));
    CHECK(cos2_alpha(t2.metric(), RealTwoPlane{x, y}) ==
          doctest::Approx(cos2_alpha(t1.metric(), RealTwoPlane{x, y})).epsilon(1e-10));
  }
}

TEST_CASE("curvature tensor symmetry suite over the models") {
  const std::vector<KahlerChart> charts = {
      models::complex_hyperbolic(1, 1.0), models::complex_hyperbolic(2, 1.0),
      models::g_omega(2), models::perturbed_ball(2, 0.05, 23),
      models::polydisc_like(2), models::flat(2)};
  for (const auto& chart : charts) {
    for (std::size_t i = 0; i < 6; ++i) {
      const auto p = sample(chart, 100 + i, i);
      const auto t = curvature_at(chart, p);
      CHECK(hermitian_symmetry_residual(t) < 1e-10);
      CHECK(kahler_symmetry_residual(t) < 1e-10);
      CHECK(ricci_trace_residual(chart, p) < 1e-8);
    }
  }
}

TEST_CASE("ricci form and ratio examples") {
  auto disc = models::poincare_disc();
  const std::vector<cd> p = {cd(0.35, -0.2)};
  const MatrixXcd ric = ricci_form_at(disc, p);
  const MatrixXcd g = metric_at(disc, p);
  CHECK(max_abs(ric + 2.0 * g) < 1e-12);
  const auto [lo1, hi1] = ricci_ratio_range(disc, p);
  CHECK(lo1 == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(hi1 == doctest::Approx(-2.0).epsilon(1e-10));

  auto ball2 = models::complex_hyperbolic(2, 1.0);
  const std::vector<cd> q = {cd(0.2, 0.3), cd(-0.1, 0.25)};
  CHECK(max_abs(ricci_form_at(ball2, q) + 3.0 * metric_at(ball2, q)) < 1e-11);

  auto plane = models::flat(2);
  const std::vector<cd> r = {cd(0.4, 0.0), cd(0.0, -0.6)};
  CHECK(max_abs(ricci_form_at(plane, r)) < 1e-13);
  const auto [lo0, hi0] = ricci_ratio_range(plane, r);
  CHECK(std::abs(lo0) < 1e-12);
  CHECK(std::abs(hi0) < 1e-12);
}

TEST_CASE("cos2_alpha endpoints") {
  auto ball2 = models::complex_hyperbolic(2, 1.0);
  const auto g = metric_at(ball2, std::vector<cd>{cd(0.0, 0.0), cd(0.0, 0.0)});
  VectorXcd e1 = VectorXcd::Zero(2), e2 = VectorXcd::Zero(2);
  e1(0) = 1.0;
  e2(1) = 1.0;
  CHECK(cos2_alpha(g, RealTwoPlane{e1, cd(0.0, 1.0) * e1}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cos2_alpha(g, RealTwoPlane{e1, e2}) == doctest::Approx(0.0).epsilon(1e-12));
}
