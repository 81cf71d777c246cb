#include <doctest.h>

#include <cmath>
#include <vector>

#include "kgeom/expr.hpp"
#include "kgeom/rng.hpp"

using namespace kgeom;

namespace {

PolarizedExpr disc_potential() {
  // -log(1 - z w), the unit-disc potential in polarized form
  return PolarizedExpr(1, parse_expr("(neg (log (sub 1 (mul z1 w1))))"));
}

cd raw(const Jet& jet, std::initializer_list<int> zs, std::initializer_list<int> ws, int n) {
  std::vector<std::uint8_t> e(2 * n, 0);
  for (int z : zs) e[z] += 1;
  for (int w : ws) e[n + w] += 1;
  return jet.derivative(std::span<const std::uint8_t>(e));
}

}  // namespace

TEST_CASE("bilinear example: F = z w at (0.5, 0.5)") {
  PolarizedExpr f(1, mul(zvar(0), wvar(0)));
  const cd point[2] = {cd(0.5, 0.0), cd(0.5, 0.0)};
  const Jet jet = eval_jet(f, std::span<const cd>(point, 2), 2);
  CHECK(jet.value() == cd(0.25, 0.0));
  CHECK(raw(jet, {0}, {0}, 1) == cd(1.0, 0.0));
}

TEST_CASE("disc potential at the center") {
  const PolarizedExpr f = disc_potential();
  const cd point[2] = {cd(0.0, 0.0), cd(0.0, 0.0)};
  const Jet jet = eval_jet(f, std::span<const cd>(point, 2), 2);
  CHECK(std::abs(jet.value()) < 1e-15);
  CHECK(std::abs(raw(jet, {0}, {}, 1)) < 1e-15);
  CHECK(std::abs(raw(jet, {}, {0}, 1)) < 1e-15);
  CHECK(std::abs(raw(jet, {0}, {0}, 1) - cd(1.0, 0.0)) < 1e-15);
}

TEST_CASE("disc potential mixed derivative off center") {
  const PolarizedExpr f = disc_potential();
  const cd point[2] = {cd(0.5, 0.0), cd(0.5, 0.0)};
  const Jet jet = eval_jet(f, std::span<const cd>(point, 2), 2);
  CHECK(std::abs(raw(jet, {0}, {0}, 1) - cd(16.0 / 9.0, 0.0)) < 1e-14);
}

TEST_CASE("jet of a real potential is Hermitian under slot swap") {
  const PolarizedExpr f = disc_potential();
  Rng rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    const cd z(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
    const cd point[2] = {z, std::conj(z)};
    const Jet jet = eval_jet(f, std::span<const cd>(point, 2), 4);
    const JetLayout& layout = jet.layout();
    std::vector<std::uint8_t> swapped(2);
    for (int i = 0; i < layout.size(); ++i) {
      swapped[0] = layout.exponents(i)[1];
      swapped[1] = layout.exponents(i)[0];
      const int j = layout.index_of(swapped.data());
      CHECK(std::abs(jet.taylor(i) - std::conj(jet.taylor(j))) < 1e-12);
    }
  }
}

TEST_CASE("finite differences confirm first derivatives") {
  // F = -log(1 - z1 w1) + exp(z2 w2 / 3), two slot pairs
  const Ex root = add(neg(log(sub(constant(1.0), mul(zvar(0), wvar(0))))),
                      exp(div(mul(zvar(1), wvar(1)), constant(3.0))));
  const PolarizedExpr f(2, root);
  Rng rng(12);
  const double h = 1e-5;
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<cd> point = {cd(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)),
                             cd(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)),
                             cd(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)),
                             cd(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))};
    const Jet jet = eval_jet(f, point, 1);
    for (int v = 0; v < 4; ++v) {
      auto shifted = [&](double delta) {
        std::vector<cd> q = point;
        q[v] += delta;
        return eval_jet(f, q, 0).value();
      };
      const cd fd = (shifted(h) - shifted(-h)) / (2.0 * h);
      std::vector<std::uint8_t> e(4, 0);
      e[v] = 1;
      const cd exact = jet.derivative(std::span<const std::uint8_t>(e));
      CHECK(std::abs(fd - exact) <= 1e-8 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("chain consistency of exp") {
  // eval_jet of exp(G) equals exp composed with the jet of G.
  const Ex g_root = sub(mul(zvar(0), wvar(0)), constant(0.25));
  const PolarizedExpr g(1, g_root);
  const PolarizedExpr eg(1, exp(g_root));
  const cd point[2] = {cd(0.3, 0.2), cd(0.3, -0.2)};
  const Jet inner = eval_jet(g, std::span<const cd>(point, 2), 4);
  const Jet direct = eval_jet(eg, std::span<const cd>(point, 2), 4);
  const Jet composed = jet_exp(inner);
  for (int i = 0; i < direct.layout().size(); ++i)
    CHECK(std::abs(direct.taylor(i) - composed.taylor(i)) <=
          1e-13 * std::max(1.0, std::abs(direct.taylor(i))));
}

TEST_CASE("check_real_potential classifies potentials") {
  Rng rng(8);
  std::vector<std::vector<cd>> points;
  for (int i = 0; i < 10; ++i)
    points.push_back({cd(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))});

  const PolarizedExpr zw(1, mul(zvar(0), wvar(0)));
  CHECK(check_real_potential(zw, points).ok);

  const PolarizedExpr just_z(1, zvar(0));
  CHECK_FALSE(check_real_potential(just_z, points).ok);

  CHECK(check_real_potential(disc_potential(), points).ok);
}

TEST_CASE("eval_jet rejects bad orders and singular points") {
  const PolarizedExpr f = disc_potential();
  const cd inside[2] = {cd(0.5, 0.0), cd(0.5, 0.0)};
  CHECK_THROWS_AS(eval_jet(f, std::span<const cd>(inside, 2), 5), OrderError);
  const cd singular[2] = {cd(1.0, 0.0), cd(1.0, 0.0)};  // log(0)
  CHECK_THROWS_AS(eval_jet(f, std::span<const cd>(singular, 2), 2), DomainError);
}

TEST_CASE("parser round trips the documented grammar") {
  CHECK_NOTHROW(parse_expr("(add 1 2 3)"));
  CHECK_NOTHROW(parse_expr("(mul z1 w1 (exp z2))"));
  CHECK_NOTHROW(parse_expr("(pow (sub 1 z1) -2)"));
  CHECK_NOTHROW(parse_expr("0.5"));
  CHECK_NOTHROW(parse_expr("z3"));

  CHECK_THROWS_AS(parse_expr(""), ParseError);
  CHECK_THROWS_AS(parse_expr("(frob z1)"), ParseError);
  CHECK_THROWS_AS(parse_expr("(add 1"), ParseError);
  CHECK_THROWS_AS(parse_expr("(neg 1) extra"), ParseError);
  CHECK_THROWS_AS(parse_expr("(pow z1 1.5)"), ParseError);
  CHECK_THROWS_AS(parse_expr("(neg)"), ParseError);
}

TEST_CASE("parsed pow evaluates like repeated multiplication") {
  const PolarizedExpr f(1, parse_expr("(pow z1 3)"));
  const cd point[2] = {cd(2.0, 0.0), cd(0.0, 0.0)};
  const Jet jet = eval_jet(f, std::span<const cd>(point, 2), 2);
  CHECK(jet.value() == cd(8.0, 0.0));
  CHECK(raw(jet, {0}, {}, 1) == cd(12.0, 0.0));
}

TEST_CASE("structural equality and reindexing") {
  const Ex a = parse_expr("(neg (log (sub 1 (mul z1 w1))))");
  const Ex b = parse_expr("(neg (log (sub 1 (mul z1 w1))))");
  CHECK(structurally_equal(a, b));
  CHECK_FALSE(structurally_equal(a, parse_expr("(log (sub 1 (mul z1 w1)))")));

  const Ex shifted = reindex_pairs(a, 2);
  CHECK(max_pair_index(shifted) == 2);
  CHECK(structurally_equal(shifted, parse_expr("(neg (log (sub 1 (mul z3 w3))))")));
}

TEST_CASE("variable substitution composes expressions") {
  // u(x) = x^2 with x := z1 w1 substituted for the first slot pair
  const Ex u = pow(zvar(0), 2);
  const Ex x_expr = mul(zvar(0), wvar(0));
  const Ex composed = substitute_variables(u, [&](const Node& n) -> std::optional<Ex> {
    if (n.pair_index != 0) return std::nullopt;
    return n.conjugate_slot ? Ex(constant(1.0)) : x_expr;
  });
  const PolarizedExpr f(1, composed);
  const cd point[2] = {cd(0.5, 0.0), cd(2.0, 0.0)};  // x = 1
  CHECK(std::abs(eval_jet(f, std::span<const cd>(point, 2), 0).value() - cd(1.0, 0.0)) <
        1e-15);
}

TEST_CASE("expressions may not reference slots beyond their declared count") {
  CHECK_THROWS_AS(PolarizedExpr(1, zvar(1)), BadParams);
}
