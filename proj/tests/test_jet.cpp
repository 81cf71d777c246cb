#include <doctest.h>

#include <vector>

#include "kgeom/jet.hpp"
#include "kgeom/rng.hpp"

using namespace kgeom;

namespace {

// Brute-force truncated product, the independent oracle for jet_mul.
Jet naive_mul(const Jet& a, const Jet& b) {
  const JetLayout& layout = a.layout();
  Jet out(a.layout_ptr());
  const int n = layout.size();
  std::vector<std::uint8_t> sum(layout.vars());
  for (int ia = 0; ia < n; ++ia) {
    for (int ib = 0; ib < n; ++ib) {
      if (layout.degree(ia) + layout.degree(ib) > layout.order()) continue;
      for (int v = 0; v < layout.vars(); ++v)
        sum[v] = static_cast<std::uint8_t>(layout.exponents(ia)[v] + layout.exponents(ib)[v]);
      out.taylor(layout.index_of(sum.data())) += a.taylor(ia) * b.taylor(ib);
    }
  }
  return out;
}

Jet random_jet(std::shared_ptr<const JetLayout> layout, Rng& rng) {
  Jet j(std::move(layout));
  for (int i = 0; i < j.layout().size(); ++i)
    j.taylor(i) = cd(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  return j;
}

double max_diff(const Jet& a, const Jet& b) {
  double worst = 0.0;
  for (int i = 0; i < a.layout().size(); ++i)
    worst = std::max(worst, std::abs(a.taylor(i) - b.taylor(i)));
  return worst;
}

}  // namespace

TEST_CASE("layout enumerates graded monomials") {
  auto layout = JetLayout::get(4, 4);
  CHECK(layout->size() == 70);  // C(8, 4)
  CHECK(layout->degree_begin(0) == 0);
  CHECK(layout->degree_end(0) == 1);
  CHECK(layout->degree_end(1) - layout->degree_begin(1) == 4);
  CHECK(layout->degree_end(2) - layout->degree_begin(2) == 10);

  for (int i = 0; i < layout->size(); ++i)
    CHECK(layout->index_of(layout->exponents(i)) == i);

  // shifting past the truncation order leaves the layout
  const std::uint8_t top[4] = {4, 0, 0, 0};
  CHECK(layout->shifted_index(layout->index_of(top), 0) == -1);
}

TEST_CASE("layout handles zero variables") {
  auto layout = JetLayout::get(0, 4);
  CHECK(layout->size() == 1);
  Jet a = Jet::constant(layout, cd(2.0, 1.0));
  Jet b = Jet::constant(layout, cd(0.5, 0.0));
  CHECK(jet_mul(a, b).value() == cd(1.0, 0.5));
}

TEST_CASE("product against the brute-force convolution") {
  auto layout = JetLayout::get(5, 4);
  Rng rng(42);
  for (int rep = 0; rep < 10; ++rep) {
    const Jet a = random_jet(layout, rng);
    const Jet b = random_jet(layout, rng);
    CHECK(max_diff(jet_mul(a, b), naive_mul(a, b)) < 1e-14);
  }
}

TEST_CASE("polynomial derivatives are exact for integer coefficients") {
  // F = (z + 2w)^3 + 5 z^2 w^2; raw derivatives at (z, w) = (1, 1) are
  // integers and must come out bit-for-bit.
  auto layout = JetLayout::get(2, 4);
  const Jet z = Jet::variable(layout, 0, cd(1.0, 0.0));
  const Jet w = Jet::variable(layout, 1, cd(1.0, 0.0));
  Jet f = jet_ipow(jet_add(z, jet_add(w, w)), 3);
  Jet z2w2 = jet_mul(jet_mul(z, z), jet_mul(w, w));
  jet_axpy_inplace(f, cd(5.0, 0.0), z2w2);

  auto raw = [&](int a, int b) {
    const std::uint8_t e[2] = {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)};
    return f.derivative(std::span<const std::uint8_t>(e, 2));
  };
  CHECK(raw(0, 0) == cd(32.0, 0.0));   // 27 + 5
  CHECK(raw(1, 0) == cd(37.0, 0.0));   // 3*9 + 10
  CHECK(raw(0, 1) == cd(64.0, 0.0));   // 6*9 + 10
  CHECK(raw(1, 1) == cd(56.0, 0.0));   // 12*3 + 20
  CHECK(raw(2, 2) == cd(20.0, 0.0));
}

TEST_CASE("inverse and division") {
  auto layout = JetLayout::get(3, 4);
  Rng rng(7);
  Jet u = random_jet(layout, rng);
  u.taylor(0) = cd(1.5, -0.25);
  const Jet one = jet_mul(u, jet_inv(u));
  CHECK(std::abs(one.value() - cd(1.0, 0.0)) < 1e-14);
  for (int i = 1; i < layout->size(); ++i) CHECK(std::abs(one.taylor(i)) < 1e-13);

  Jet zero = Jet::constant(layout, cd(0.0, 0.0));
  CHECK_THROWS_AS(jet_inv(zero), DomainError);
}

TEST_CASE("exp and log invert each other") {
  auto layout = JetLayout::get(3, 4);
  Rng rng(11);
  Jet u = random_jet(layout, rng);
  u.taylor(0) = cd(0.8, 0.3);
  CHECK(max_diff(jet_log(jet_exp(u)), u) < 1e-13);

  const Jet prod = jet_mul(jet_exp(u), jet_exp(jet_neg(u)));
  CHECK(std::abs(prod.value() - cd(1.0, 0.0)) < 1e-13);
  for (int i = 1; i < layout->size(); ++i) CHECK(std::abs(prod.taylor(i)) < 1e-13);
}

TEST_CASE("log rejects the closed negative real axis") {
  auto layout = JetLayout::get(1, 2);
  CHECK_THROWS_AS(jet_log(Jet::constant(layout, cd(0.0, 0.0))), DomainError);
  CHECK_THROWS_AS(jet_log(Jet::constant(layout, cd(-2.0, 0.0))), DomainError);
  CHECK_NOTHROW(jet_log(Jet::constant(layout, cd(-2.0, 0.1))));
  CHECK_NOTHROW(jet_log(Jet::constant(layout, cd(2.0, 0.0))));
}

TEST_CASE("integer powers, including negative") {
  auto layout = JetLayout::get(2, 4);
  const Jet z = Jet::variable(layout, 0, cd(2.0, 0.0));
  const Jet p = jet_ipow(z, -2);
  CHECK(std::abs(p.value() - cd(0.25, 0.0)) < 1e-15);
  const std::uint8_t e[2] = {1, 0};
  CHECK(std::abs(p.derivative(std::span<const std::uint8_t>(e, 2)) - cd(-0.25, 0.0)) < 1e-15);
}

TEST_CASE("derivative jets restate the tail of the source jet") {
  auto source_layout = JetLayout::get(2, 4);
  Rng rng(3);
  const Jet f = random_jet(source_layout, rng);
  const std::uint8_t sigma[2] = {1, 1};
  const Jet g = jet_derivative_jet(f, std::span<const std::uint8_t>(sigma, 2),
                                   JetLayout::get(2, 2));
  const JetLayout& gl = g.layout();
  std::vector<std::uint8_t> e(2);
  for (int i = 0; i < gl.size(); ++i) {
    e[0] = static_cast<std::uint8_t>(gl.exponents(i)[0] + sigma[0]);
    e[1] = static_cast<std::uint8_t>(gl.exponents(i)[1] + sigma[1]);
    CHECK(std::abs(g.derivative(i) -
                   f.derivative(std::span<const std::uint8_t>(e.data(), 2))) < 1e-13);
  }
}

TEST_CASE("requested order above the cap is rejected") {
  CHECK_THROWS_AS(JetLayout::get(2, 5), OrderError);
}
