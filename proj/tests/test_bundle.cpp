#include <doctest.h>

#include <cmath>
#include <vector>

#include "kgeom/models.hpp"
#include "kgeom/rng.hpp"

using namespace kgeom;

namespace {

std::vector<cd> bundle_sample(const BundleChart& b, std::uint64_t seed, std::size_t index) {
  Rng rng = substream(seed, {index});
  return b.total.sampler(index, rng);
}

VectorXcd random_dir(Rng& rng, int n) {
  VectorXcd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.complex_normal();
  return x;
}

}  // namespace

TEST_CASE("disc bundle over a point is the unit disc") {
  const auto b = disc_bundle_chart(weight_from_chart(models::flat(0)));
  CHECK(b.total.m == 1);
  Rng rng(1);
  for (int rep = 0; rep < 3; ++rep) {
    const std::vector<cd> pt = {cd(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6))};
    CHECK(hsc(b.total, pt, HoloDirection{VectorXcd::Ones(1)}) ==
          doctest::Approx(-2.0).epsilon(1e-11));
  }
}

TEST_CASE("disc bundle metric over the ball base at z = 0") {
  const auto b = disc_bundle_chart(weight_from_chart(models::poincare_disc()));
  const std::vector<cd> pt = {cd(0.4, 0.3), cd(0.0, 0.0)};  // fiber first
  const double x = std::norm(pt[0]);
  const MatrixXcd g = metric_at(b.total, pt);
  CHECK(std::abs(g(0, 0) - cd(1.0 / ((1 - x) * (1 - x)), 0.0)) < 1e-13);
  CHECK(std::abs(g(1, 1) - cd(1.0 / (1 - x), 0.0)) < 1e-13);
  CHECK(std::abs(g(0, 1)) < 1e-14);
}

TEST_CASE("flat-weight base gives zero hsc in base directions on the zero section") {
  const auto b = disc_bundle_chart(models::flat_weight(1));
  const std::vector<cd> pt = {cd(0.0, 0.0), cd(0.3, -0.2)};
  VectorXcd base_dir(2);
  base_dir << cd(0.0, 0.0), cd(1.0, 0.0);
  CHECK(std::abs(hsc(b.total, pt, HoloDirection{base_dir})) < 1e-11);
}

TEST_CASE("general Calabi chart with the log profile matches the disc bundle DAG") {
  const auto w = weight_from_chart(models::poincare_disc());
  const auto via_profile = general_calabi_chart(w, standard_disc_profile());
  const auto direct = disc_bundle_chart(w);
  CHECK(structurally_equal(via_profile.total.potential.root(),
                           direct.total.potential.root()));
  for (std::size_t i = 0; i < 20; ++i) {
    const auto pt = bundle_sample(direct, 40 + i, i);
    CHECK(max_abs(metric_at(via_profile.total, pt) - metric_at(direct.total, pt)) == 0.0);
  }
}

TEST_CASE("profile admissibility") {
  CHECK_NOTHROW(check_profile_admissible(standard_disc_profile()));
  // u(x) = x: flat profile, admissible
  CHECK_NOTHROW(check_profile_admissible(CalabiProfile{mul(zvar(0), wvar(0))}));
  // u(x) = -x: u' < 0 at x = 0
  CHECK_THROWS_AS(check_profile_admissible(CalabiProfile{neg(mul(zvar(0), wvar(0)))}),
                  ProfileInadmissible);
}

TEST_CASE("ball bundle examples") {
  const auto w1 = weight_from_chart(models::poincare_disc());
  const auto k1 = ball_bundle_chart(w1, 1);
  const auto disc = disc_bundle_chart(w1);
  CHECK(structurally_equal(k1.total.potential.root(), disc.total.potential.root()));

  const auto k2 = ball_bundle_chart(w1, 2);
  const std::vector<cd> origin = {cd(0.0, 0.0), cd(0.0, 0.0), cd(0.0, 0.0)};
  CHECK(max_abs(metric_at(k2.total, origin) - MatrixXcd::Identity(3, 3)) < 1e-14);

  // rank-2 bundle over a point is the unit 2-ball, hsc = -2
  const auto ball2 = ball_bundle_chart(weight_from_chart(models::flat(0)), 2);
  Rng rng(3);
  const std::vector<cd> pt = {cd(0.3, 0.2), cd(-0.25, 0.4)};
  CHECK(hsc(ball2.total, pt, HoloDirection{random_dir(rng, 2)}) ==
        doctest::Approx(-2.0).epsilon(1e-11));

  CHECK_THROWS_AS(ball_bundle_chart(w1, 0), BadParams);
}

TEST_CASE("iterated charts telescope to the ball bundle") {
  const auto w = weight_from_chart(models::poincare_disc());
  for (int k = 1; k <= 3; ++k) {
    const auto direct = ball_bundle_chart(w, k);
    const auto nested = iterated_chart(w, k);
    for (std::size_t i = 0; i < 15; ++i) {
      const auto pt = bundle_sample(direct, 50 + k, i);
      CHECK(max_abs(metric_at(direct.total, pt) - metric_at(nested.total, pt)) < 1e-10);
    }
  }

  // over a point base, three nested discs give the 3-ball with hsc -2
  const auto tower = iterated_chart(weight_from_chart(models::flat(0)), 3);
  Rng rng(5);
  const std::vector<cd> pt = {cd(0.2, 0.1), cd(-0.3, 0.2), cd(0.1, -0.4)};
  CHECK(hsc(tower.total, pt, HoloDirection{random_dir(rng, 3)}) ==
        doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("closed-form metric") {
  // point base: single entry 1/(1-|v|^2)^2
  const auto w0 = weight_from_chart(models::flat(0));
  const cd v(0.5, 0.25);
  const MatrixXcd g0 = closed_form_metric(w0, {}, v);
  const double denom = 1.0 - std::norm(v);
  CHECK(std::abs(g0(0, 0) - cd(1.0 / (denom * denom), 0.0)) < 1e-14);

  // ball base at z = 0: diag(1/(1-|v|^2)^2, 1/(1-|v|^2))
  const auto w1 = weight_from_chart(models::poincare_disc());
  const std::vector<cd> z0 = {cd(0.0, 0.0)};
  const MatrixXcd g1 = closed_form_metric(w1, z0, v);
  CHECK(std::abs(g1(0, 0) - cd(1.0 / (denom * denom), 0.0)) < 1e-13);
  CHECK(std::abs(g1(1, 1) - cd(1.0 / denom, 0.0)) < 1e-13);

  // random base point: matches the AD metric
  const auto b = disc_bundle_chart(w1);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto pt = bundle_sample(b, 60, i);
    const auto zb = b.base_point(pt);
    CHECK(max_abs(closed_form_metric(w1, zb, pt[0]) - metric_at(b.total, pt)) < 1e-10);
  }

  CHECK_THROWS_AS(closed_form_metric(w0, {}, cd(1.2, 0.0)), OutsideDisc);
}

TEST_CASE("closed-form determinant") {
  const auto w0 = weight_from_chart(models::flat(0));
  const cd half(std::sqrt(0.5), 0.0);  // |v|^2 = 0.5
  CHECK(closed_form_det(w0, {}, half) == doctest::Approx(4.0).epsilon(1e-12));

  const auto w1 = weight_from_chart(models::poincare_disc());
  const std::vector<cd> z0 = {cd(0.0, 0.0)};
  const cd v(0.3, -0.4);
  CHECK(closed_form_det(w1, z0, v) ==
        doctest::Approx(std::pow(1.0 - std::norm(v), -3.0)).epsilon(1e-12));

  const auto b = disc_bundle_chart(w1);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto pt = bundle_sample(b, 61, i);
    const auto zb = b.base_point(pt);
    const double direct = closed_form_det(w1, zb, pt[0]);
    const double ad = metric_at(b.total, pt).determinant().real();
    CHECK(std::abs(direct - ad) / direct < 1e-10);
  }
}

TEST_CASE("domination of the pulled-back base metric") {
  const auto b = disc_bundle_chart(weight_from_chart(models::poincare_disc()));

  // on the zero section the base block cancels exactly
  const std::vector<cd> on_base = {cd(0.0, 0.0), cd(0.3, 0.1)};
  const double at_base = domination_residual(b, on_base);
  CHECK(at_base >= -1e-12);
  CHECK(at_base < 1e-12);

  // interior fiber points dominate strictly
  const std::vector<cd> interior = {cd(0.5, 0.2), cd(0.3, 0.1)};
  CHECK(domination_residual(b, interior) > 0.0);

  const auto bf = disc_bundle_chart(models::flat_weight(1));
  for (std::size_t i = 0; i < 10; ++i) {
    const auto pt = bundle_sample(bf, 62, i);
    CHECK(domination_residual(bf, pt) >= -1e-12);
  }
}

TEST_CASE("Ricci identity for the disc bundle") {
  // over the CH base the bundle is Einstein with constant -3
  const auto b1 = disc_bundle_chart(weight_from_chart(models::poincare_disc()));
  for (std::size_t i = 0; i < 8; ++i) {
    const auto pt = bundle_sample(b1, 63, i);
    CHECK(ricci_identity_residual(b1, pt) < 1e-8);
    const auto [lo, hi] = ricci_ratio_range(b1.total, pt);
    CHECK(lo == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(hi == doctest::Approx(-3.0).epsilon(1e-9));
  }

  const auto b2 = disc_bundle_chart(weight_from_chart(models::perturbed_ball(1, 0.03, 5)));
  for (std::size_t i = 0; i < 8; ++i)
    CHECK(ricci_identity_residual(b2, bundle_sample(b2, 64, i)) < 1e-8);

  // flat base: Ric(g_D) = -(m+2) g_D + (m+1) pi* g_M
  const auto b3 = disc_bundle_chart(models::flat_weight(1));
  const std::vector<cd> pt = {cd(0.4, -0.1), cd(0.2, 0.5)};
  const MatrixXcd ric = ricci_form_at(b3.total, pt);
  const MatrixXcd g_total = metric_at(b3.total, pt);
  MatrixXcd expected = -3.0 * g_total;
  expected(1, 1) += 2.0 * metric_at(b3.base, b3.base_point(pt))(0, 0);
  CHECK(max_abs(ric - expected) < 1e-9);
}

TEST_CASE("hsc transfer formula") {
  const auto b = disc_bundle_chart(weight_from_chart(models::poincare_disc()));

  // pure fiber direction: exactly -2
  VectorXcd fiber = VectorXcd::Zero(2);
  fiber(0) = cd(1.0, 0.0);
  const std::vector<cd> pt = {cd(0.35, 0.1), cd(0.2, -0.3)};
  const auto t = curvature_at(b.total, pt);
  CHECK(hsc(t, HoloDirection{fiber}) == doctest::Approx(-2.0).epsilon(1e-11));

  // on the zero section, base directions reproduce the base hsc
  const auto pb = models::perturbed_ball(1, 0.04, 9);
  const auto bp = disc_bundle_chart(weight_from_chart(pb));
  const std::vector<cd> zs = {cd(0.0, 0.0), cd(0.25, 0.3)};
  VectorXcd base_dir = VectorXcd::Zero(2);
  base_dir(1) = cd(1.0, 0.0);
  const double total_hsc = hsc(bp.total, zs, HoloDirection{base_dir});
  const double base_hsc = hsc(bp.base, bp.base_point(zs), HoloDirection{VectorXcd::Ones(1)});
  CHECK(total_hsc == doctest::Approx(base_hsc).epsilon(1e-10));

  // the residual vanishes at random points and directions
  Rng rng(7);
  for (std::size_t i = 0; i < 15; ++i) {
    const auto q = bundle_sample(bp, 65, i);
    CHECK(hsc_formula_residual(bp, q, HoloDirection{random_dir(rng, 2)}) < 1e-8);
  }
  CHECK_THROWS_AS(hsc_formula_residual(bp, zs, HoloDirection{VectorXcd::Zero(2)}),
                  ZeroDirection);
}

TEST_CASE("sectional transfer formula") {
  const double s = kSectionalPlaneFactor;

  // planes with vanishing base projection sit at the -2 endpoint
  const auto b = disc_bundle_chart(weight_from_chart(models::poincare_disc()));
  const std::vector<cd> pt = {cd(0.3, -0.2), cd(0.15, 0.25)};
  VectorXcd fiber = VectorXcd::Zero(2);
  fiber(0) = cd(1.0, 0.0);
  Rng rng(8);
  CHECK(sectional_formula_residual(b, pt, RealTwoPlane{fiber, random_dir(rng, 2)}, s) <
        1e-10);

  // CH base: every (Hermitian-orthonormalized) plane evaluates to -2 on both
  // sides
  for (std::size_t i = 0; i < 10; ++i) {
    const auto q = bundle_sample(b, 66, i);
    CHECK(sectional_formula_residual(
              b, q, RealTwoPlane{random_dir(rng, 2), random_dir(rng, 2)}, s) < 1e-10);
  }

  // perturbed base: the full formula still closes
  const auto bp = disc_bundle_chart(weight_from_chart(models::perturbed_ball(1, 0.05, 13)));
  for (std::size_t i = 0; i < 15; ++i) {
    const auto q = bundle_sample(bp, 67, i);
    CHECK(sectional_formula_residual(
              bp, q, RealTwoPlane{random_dir(rng, 2), random_dir(rng, 2)}, s) < 1e-8);
  }

  CHECK_THROWS_AS(
      sectional_formula_residual(b, pt, RealTwoPlane{fiber, cd(2.0, 0.0) * fiber}, s),
      DegeneratePlane);
}

TEST_CASE("calibration pins the plane normalization factor to one half") {
  CHECK(calibrate_plane_factor() == 0.5);
  CHECK(kSectionalPlaneFactor == 0.5);

  // the rejected candidates fail by an order-one margin
  const auto b = disc_bundle_chart(weight_from_chart(models::poincare_disc()));
  Rng rng(9);
  const auto pt = bundle_sample(b, 68, 1);
  const RealTwoPlane plane{random_dir(rng, 2), random_dir(rng, 2)};
  CHECK(sectional_formula_residual(b, pt, plane, 1.0) > 0.1);
  CHECK(sectional_formula_residual(b, pt, plane, 2.0) > 0.1);
}

TEST_CASE("restriction to the zero section") {
  const auto pb = models::perturbed_ball(2, 0.04, 19);
  const auto b = disc_bundle_chart(weight_from_chart(pb));
  Rng rng(10);
  for (int rep = 0; rep < 5; ++rep) {
    const auto z = pb.sampler(rep, rng);
    std::vector<cd> pt(3, cd(0.0, 0.0));
    pt[1] = z[0];
    pt[2] = z[1];
    const MatrixXcd g = metric_at(b.total, pt);
    const MatrixXcd g_base = metric_at(pb, z);
    CHECK(max_abs(g.block(1, 1, 2, 2) - g_base) < 1e-12);
    CHECK(std::abs(g(0, 0) - cd(1.0 / b.h_value(z), 0.0)) < 1e-12);
    CHECK(std::abs(g(0, 1)) < 1e-13);
    CHECK(std::abs(g(0, 2)) < 1e-13);
  }
}

TEST_CASE("fiber ray length") {
  CHECK(fiber_ray_length(0.0) == 0.0);
  CHECK(std::abs(fiber_ray_length(std::tanh(1.0)) - 1.0) < 1e-10);
  CHECK(fiber_ray_length(1.0 - 1e-6) > 7.0);
  // monotone in r
  CHECK(fiber_ray_length(0.9) > fiber_ray_length(0.5));
  CHECK_THROWS_AS(fiber_ray_length(1.0), OutOfRange);
  CHECK_THROWS_AS(fiber_ray_length(-0.1), OutOfRange);
}

TEST_CASE("weights that do not match the base metric are rejected") {
  LineBundleWeight bad;
  bad.base = models::poincare_disc();
  bad.h = exp(neg(mul(constant(2.0), mul(zvar(0), wvar(0)))));  // wrong curvature
  CHECK_THROWS_AS(disc_bundle_chart(bad), WeightNotPositive);
}
