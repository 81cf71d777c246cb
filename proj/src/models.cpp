#include "kgeom/models.hpp"

#include <cmath>

#include "kgeom/rng.hpp"

namespace kgeom::models {

namespace {

constexpr double kSampleRadius = 0.95;

Ex ball_sum(int m) {
  std::vector<Ex> terms;
  terms.reserve(m);
  for (int i = 0; i < m; ++i) terms.push_back(mul(zvar(i), wvar(i)));
  return sum(terms);
}

std::function<bool(std::span<const cd>)> ball_domain(int m) {
  return [m](std::span<const cd> z) {
    if (static_cast<int>(z.size()) != m) return false;
    double s = 0.0;
    for (const cd& v : z) s += std::norm(v);
    return s < 1.0;
  };
}

/// Uniform angle, radius biased so samples spread over the ball of radius
/// kSampleRadius; coordinates split the radius budget evenly.
Sampler ball_sampler(int m) {
  return [m](std::size_t, Rng& rng) {
    std::vector<cd> z(m);
    const double rmax = kSampleRadius / std::sqrt(static_cast<double>(m));
    for (int i = 0; i < m; ++i) {
      const double r = rmax * std::sqrt(rng.uniform());
      const double a = rng.uniform(0.0, 6.283185307179586);
      z[i] = cd(r * std::cos(a), r * std::sin(a));
    }
    return z;
  };
}

Sampler box_sampler(int m, double half_width) {
  return [m, half_width](std::size_t, Rng& rng) {
    std::vector<cd> z(m);
    for (int i = 0; i < m; ++i)
      z[i] = cd(rng.uniform(-half_width, half_width), rng.uniform(-half_width, half_width));
    return z;
  };
}

void require_dim(int m, int lo, int hi) {
  if (m < lo || m > hi)
    throw BadParams("dimension m = " + std::to_string(m) + " outside [" +
                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

}  // namespace

KahlerChart complex_hyperbolic(int m, double scale) {
  require_dim(m, 1, 6);
  if (!(scale > 0.0)) throw BadParams("scale must be positive");
  Ex pot = neg(log(sub(constant(1.0), ball_sum(m))));
  if (scale != 1.0) pot = mul(constant(scale), pot);
  KahlerChart chart;
  chart.m = m;
  chart.potential = PolarizedExpr(m, pot);
  chart.domain = ball_domain(m);
  chart.sampler = ball_sampler(m);
  chart.name = "complex_hyperbolic(" + std::to_string(m) + ")";
  return chart;
}

KahlerChart flat(int m) {
  require_dim(m, 0, 6);
  KahlerChart chart;
  chart.m = m;
  chart.potential = PolarizedExpr(m, ball_sum(m));
  chart.domain = [m](std::span<const cd> z) { return static_cast<int>(z.size()) == m; };
  chart.sampler = box_sampler(m, 1.0);
  chart.name = "flat(" + std::to_string(m) + ")";
  return chart;
}

KahlerChart g_omega(int m) {
  KahlerChart chart = complex_hyperbolic(m, 2.0);
  chart.name = "g_omega(" + std::to_string(m) + ")";
  return chart;
}

KahlerChart poincare_disc() {
  KahlerChart chart = complex_hyperbolic(1, 1.0);
  chart.name = "poincare_disc";
  return chart;
}

KahlerChart perturbed_ball(int m, double eps, std::uint64_t seed) {
  require_dim(m, 1, 3);
  if (!(eps >= 0.0) || eps > 0.05)
    throw BadParams("perturbation eps must lie in [0, 0.05]");

  // eps * Re(sum c_ab z^a w^b) over mixed exponents with |a|, |b| >= 1 and
  // |a| + |b| <= 4. Coefficients are normalized so the perturbation Hessian
  // stays below 1 on the 0.95-ball, which keeps the metric positive definite
  // for eps <= 0.05.
  auto layout = JetLayout::get(m, 4);
  struct Term {
    std::vector<std::uint8_t> a, b;
    cd coeff;
  };
  std::vector<Term> terms;
  Rng rng = substream(seed, {0x9e37ull});
  double weight_sum = 0.0;
  for (int ia = 0; ia < layout->size(); ++ia) {
    const int da = layout->degree(ia);
    if (da < 1) continue;
    for (int ib = 0; ib < layout->size(); ++ib) {
      const int db = layout->degree(ib);
      if (db < 1 || da + db > 4) continue;
      Term t;
      t.a.assign(layout->exponents(ia), layout->exponents(ia) + m);
      t.b.assign(layout->exponents(ib), layout->exponents(ib) + m);
      t.coeff = cd(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      weight_sum += std::abs(t.coeff) * da * db;
      terms.push_back(std::move(t));
    }
  }
  const double norm = weight_sum > 0.0 ? 1.0 / weight_sum : 1.0;

  auto monomial = [&](const std::vector<std::uint8_t>& a,
                      const std::vector<std::uint8_t>& b, cd coeff) {
    Ex term = constant(coeff);
    for (int v = 0; v < m; ++v) {
      if (a[v] == 1) term = mul(term, zvar(v));
      if (a[v] > 1) term = mul(term, pow(zvar(v), a[v]));
      if (b[v] == 1) term = mul(term, wvar(v));
      if (b[v] > 1) term = mul(term, pow(wvar(v), b[v]));
    }
    return term;
  };
  std::vector<Ex> pieces;
  pieces.reserve(2 * terms.size());
  for (const Term& t : terms) {
    const cd c = 0.5 * eps * norm * t.coeff;
    pieces.push_back(monomial(t.a, t.b, c));
    pieces.push_back(monomial(t.b, t.a, std::conj(c)));
  }
  const Ex perturbation = sum(pieces);
  const Ex pot = add(neg(log(sub(constant(1.0), ball_sum(m)))), perturbation);

  KahlerChart chart;
  chart.m = m;
  chart.potential = PolarizedExpr(m, pot);
  chart.domain = ball_domain(m);
  chart.sampler = ball_sampler(m);
  chart.name = "perturbed_ball(" + std::to_string(m) + ")";
  return chart;
}

KahlerChart polydisc_like(int m) {
  require_dim(m, 1, 6);
  std::vector<Ex> terms;
  terms.reserve(m);
  for (int i = 0; i < m; ++i)
    terms.push_back(neg(log(sub(constant(1.0), mul(zvar(i), wvar(i))))));
  KahlerChart chart;
  chart.m = m;
  chart.potential = PolarizedExpr(m, sum(terms));
  chart.domain = [m](std::span<const cd> z) {
    if (static_cast<int>(z.size()) != m) return false;
    for (const cd& v : z)
      if (!(std::norm(v) < 1.0)) return false;
    return true;
  };
  chart.sampler = [m](std::size_t, Rng& rng) {
    std::vector<cd> z(m);
    for (int i = 0; i < m; ++i) {
      const double r = kSampleRadius * std::sqrt(rng.uniform());
      const double a = rng.uniform(0.0, 6.283185307179586);
      z[i] = cd(r * std::cos(a), r * std::sin(a));
    }
    return z;
  };
  chart.name = "polydisc_like(" + std::to_string(m) + ")";
  return chart;
}

LineBundleWeight flat_weight(int m) {
  return weight_from_chart(flat(m));
}

KahlerChart scale_potential(const KahlerChart& chart, double c) {
  if (!(c > 0.0)) throw BadParams("potential scale must be positive");
  if (c == 1.0) return chart;
  KahlerChart scaled = chart;
  scaled.potential =
      PolarizedExpr(chart.m, mul(constant(c), chart.potential.root()));
  scaled.name = chart.name + "*" + std::to_string(c);
  return scaled;
}

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

int int_param(const std::map<std::string, double>& params, const std::string& key,
              double fallback) {
  const double v = param_or(params, key, fallback);
  if (v != static_cast<long long>(v))
    throw BadParams("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

}  // namespace

ModelResult get_model(const std::string& name,
                      const std::map<std::string, double>& params) {
  const double scale = param_or(params, "scale", 1.0);
  auto scaled = [&](KahlerChart chart) -> ModelResult {
    return scale_potential(chart, scale);
  };
  if (name == "complex_hyperbolic")
    return scaled(complex_hyperbolic(int_param(params, "m", 1), param_or(params, "c", 1.0)));
  if (name == "flat") return scaled(flat(int_param(params, "m", 1)));
  if (name == "g_omega") return scaled(g_omega(int_param(params, "m", 1)));
  if (name == "poincare_disc") return scaled(poincare_disc());
  if (name == "perturbed_ball")
    return scaled(perturbed_ball(int_param(params, "m", 1), param_or(params, "eps", 0.03),
                                 static_cast<std::uint64_t>(int_param(params, "seed", 12345))));
  if (name == "polydisc_like") return scaled(polydisc_like(int_param(params, "m", 2)));
  if (name == "flat_weight") {
    if (scale != 1.0) throw BadParams("flat_weight does not take a scale");
    return flat_weight(int_param(params, "m", 1));
  }
  throw UnknownModel("no model named '" + name + "'");
}

std::vector<ModelInfo> catalog() {
  return {
      {"complex_hyperbolic", "m, c", "ball potential scaled by c; hsc = -2/c"},
      {"flat", "m", "flat potential |z|^2; zero curvature"},
      {"g_omega", "m", "complex hyperbolic normalized to hsc = -1"},
      {"poincare_disc", "", "unit disc, hsc = -2"},
      {"perturbed_ball", "m, eps, seed", "ball potential with a seeded analytic perturbation"},
      {"polydisc_like", "m", "sum of per-factor disc potentials; hsc in [-2, -1]"},
      {"flat_weight", "m", "weight h = e^{-|z|^2} over the flat base"},
  };
}

}  // namespace kgeom::models
