#include "kgeom/bundle.hpp"

#include <cmath>
#include <functional>

namespace kgeom {

namespace {

constexpr double kDegenerate = 1e-14;

std::vector<cd> conjugate_doubled(std::span<const cd> z) {
  std::vector<cd> point(2 * z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    point[i] = z[i];
    point[z.size() + i] = std::conj(z[i]);
  }
  return point;
}

/// h, h_j, h_kbar, h_{j kbar} at (z, conj z).
struct WeightJet {
  double h0;
  VectorXcd hz;    // d_{z_j} h
  VectorXcd hw;    // d_{w_k} h
  MatrixXcd hzw;   // d_{z_j} d_{w_k} h
};

WeightJet weight_jet(const LineBundleWeight& w, std::span<const cd> z) {
  const int m = w.base.m;
  PolarizedExpr h_expr(m, w.h);
  const Jet jet = eval_jet(h_expr, conjugate_doubled(z), 2);
  WeightJet out;
  const cd h_value = jet.value();
  if (std::abs(h_value.imag()) > 1e-10 || !(h_value.real() > 0.0))
    throw WeightNotPositive("fiber metric h is not real positive at the sample point");
  out.h0 = h_value.real();
  out.hz.resize(m);
  out.hw.resize(m);
  out.hzw.resize(m, m);
  std::vector<std::uint8_t> e(2 * m);
  auto deriv = [&](int zi, int wi) {
    std::fill(e.begin(), e.end(), 0);
    if (zi >= 0) e[zi] += 1;
    if (wi >= 0) e[m + wi] += 1;
    return jet.derivative(std::span<const std::uint8_t>(e));
  };
  for (int j = 0; j < m; ++j) {
    out.hz(j) = deriv(j, -1);
    out.hw(j) = deriv(-1, j);
    for (int k = 0; k < m; ++k) out.hzw(j, k) = deriv(j, k);
  }
  return out;
}

void validate_weight(const LineBundleWeight& w) {
  const int m = w.base.m;
  std::vector<cd> origin(m, cd(0.0, 0.0));
  std::vector<std::vector<cd>> points;
  if (!w.base.domain || w.base.domain(origin)) points.push_back(origin);
  if (w.base.sampler) {
    Rng rng = substream(0x5eedULL, {0});
    for (std::size_t i = 0; i < 3; ++i) points.push_back(w.base.sampler(i, rng));
  }
  for (const auto& z : points) {
    const WeightJet wj = weight_jet(w, z);
    // -d dbar log h = (h_j h_kbar - h h_{j kbar}) / h^2 must equal the base
    // metric (positivity of (L, h)).
    const MatrixXcd g = metric_at(w.base, z);
    double worst = 0.0;
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const cd lhs = (wj.hz(j) * wj.hw(k) - wj.h0 * wj.hzw(j, k)) / (wj.h0 * wj.h0);
        worst = std::max(worst, std::abs(lhs - g(j, k)));
      }
    if (worst > 1e-8)
      throw WeightNotPositive("curvature of h deviates from the base metric by " +
                              std::to_string(worst));
  }
}

std::function<bool(std::span<const cd>)> bundle_domain(const LineBundleWeight& w, int k) {
  const int m = w.base.m;
  auto base_domain = w.base.domain;
  PolarizedExpr h_expr(m, w.h);
  return [base_domain, h_expr, k, m](std::span<const cd> pt) {
    if (static_cast<int>(pt.size()) != k + m) return false;
    std::span<const cd> z = pt.subspan(k, m);
    if (base_domain && !base_domain(z)) return false;
    const cd h = eval_at_conjugate(h_expr, z);
    if (!(h.real() > 0.0)) return false;
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += std::norm(pt[i]);
    return s / h.real() < 1.0;
  };
}

/// Total potential phi + u(x_expr) in the (k + m)-pair slot space.
KahlerChart assemble_total(const LineBundleWeight& w, const Ex& u, int k,
                           const std::string& name) {
  const int m = w.base.m;
  const int n = k + m;
  const Ex phi = reindex_pairs(w.base.potential.root(), k);
  const Ex h_shifted = reindex_pairs(w.h, k);
  const Ex inv_h = div(constant(1.0), h_shifted);

  std::vector<Ex> x_terms;
  x_terms.reserve(k);
  for (int i = 0; i < k; ++i) x_terms.push_back(mul(mul(zvar(i), wvar(i)), inv_h));
  const Ex x_total = sum(x_terms);

  const Ex u_of_x = substitute_variables(u, [&](const Node& node) -> std::optional<Ex> {
    if (node.pair_index != 0) throw BadParams("profile uses more than one slot pair");
    return node.conjugate_slot ? Ex(constant(1.0)) : x_total;
  });
  const Ex psi = add(phi, u_of_x);

  KahlerChart total;
  total.m = n;
  total.potential = PolarizedExpr(n, psi);
  total.name = name;
  total.domain = bundle_domain(w, k);
  return total;
}

BundleChart finish_bundle(const LineBundleWeight& w, KahlerChart total, int k) {
  BundleChart b;
  b.total = std::move(total);
  b.fiber_rank = k;
  b.base = w.base;
  b.h = w.h;
  if (b.base.m == 0 || b.base.sampler) b.total.sampler = bundle_sampler(b);
  return b;
}

}  // namespace

LineBundleWeight weight_from_chart(const KahlerChart& base) {
  return LineBundleWeight{base, exp(neg(base.potential.root()))};
}

CalabiProfile standard_disc_profile() {
  return CalabiProfile{neg(log(sub(constant(1.0), mul(zvar(0), wvar(0)))))};
}

void check_profile_admissible(const CalabiProfile& profile, double x_max, int samples) {
  PolarizedExpr u_expr(1, profile.u);
  for (int i = 0; i < samples; ++i) {
    const double x = samples == 1 ? 0.0 : x_max * i / (samples - 1);
    const cd pt[2] = {cd(x, 0.0), cd(1.0, 0.0)};
    Jet jet;
    try {
      jet = eval_jet(u_expr, std::span<const cd>(pt, 2), 2);
    } catch (const DomainError& e) {
      throw ProfileInadmissible("profile undefined at x = " + std::to_string(x) + " (" +
                                e.what() + ")");
    }
    const std::uint8_t d1[2] = {1, 0};
    const std::uint8_t d2[2] = {2, 0};
    const double u1 = jet.derivative(std::span<const std::uint8_t>(d1, 2)).real();
    const double u2 = jet.derivative(std::span<const std::uint8_t>(d2, 2)).real();
    if (!(u1 > 0.0))
      throw ProfileInadmissible("u'(x) <= 0 at x = " + std::to_string(x));
    if (!(u1 + x * u2 > 0.0))
      throw ProfileInadmissible("(x u'(x))' <= 0 at x = " + std::to_string(x));
  }
}

double BundleChart::h_value(std::span<const cd> z) const {
  PolarizedExpr h_expr(base.m, h);
  const cd value = eval_at_conjugate(h_expr, z);
  if (!(value.real() > 0.0)) throw DomainError("fiber metric not positive at point");
  return value.real();
}

double BundleChart::x0_at(std::span<const cd> pt) const {
  double s = 0.0;
  for (int i = 0; i < fiber_rank; ++i) s += std::norm(pt[i]);
  return s / h_value(pt.subspan(fiber_rank, base.m));
}

std::vector<cd> BundleChart::base_point(std::span<const cd> pt) const {
  return {pt.begin() + fiber_rank, pt.end()};
}

BundleChart disc_bundle_chart(const LineBundleWeight& w) {
  return general_calabi_chart(w, standard_disc_profile());
}

BundleChart general_calabi_chart(const LineBundleWeight& w, const CalabiProfile& u) {
  validate_weight(w);
  check_profile_admissible(u);
  KahlerChart total = assemble_total(w, u.u, 1, "calabi(" + w.base.name + ")");
  return finish_bundle(w, std::move(total), 1);
}

BundleChart ball_bundle_chart(const LineBundleWeight& w, int k) {
  if (k < 1) throw BadParams("fiber rank must be >= 1");
  validate_weight(w);
  KahlerChart total = assemble_total(w, standard_disc_profile().u, k,
                                     "ball" + std::to_string(k) + "(" + w.base.name + ")");
  return finish_bundle(w, std::move(total), k);
}

BundleChart iterated_chart(const LineBundleWeight& w, int k) {
  if (k < 1) throw BadParams("fiber rank must be >= 1");
  validate_weight(w);
  const int m = w.base.m;
  const int n = k + m;
  const Ex phi = reindex_pairs(w.base.potential.root(), k);
  const Ex inv_h = div(constant(1.0), reindex_pairs(w.h, k));

  // Stage j adds -log(1 - x_j / (1 - sum_{i<j} x_i)) with x_i = |v_i|^2 / h:
  // the dual fiber weight of the next stage divides out what the previous
  // discs already used. The sum telescopes to the ball-bundle potential.
  std::vector<Ex> x_terms;
  Ex psi = phi;
  for (int j = 0; j < k; ++j) {
    const Ex xj = mul(mul(zvar(j), wvar(j)), inv_h);
    Ex ratio = xj;
    if (j > 0) ratio = div(xj, sub(constant(1.0), sum(x_terms)));
    psi = add(psi, neg(log(sub(constant(1.0), ratio))));
    x_terms.push_back(xj);
  }

  KahlerChart total;
  total.m = n;
  total.potential = PolarizedExpr(n, psi);
  total.name = "iterated" + std::to_string(k) + "(" + w.base.name + ")";
  total.domain = bundle_domain(w, k);
  return finish_bundle(w, std::move(total), k);
}

MatrixXcd closed_form_metric(const LineBundleWeight& w, std::span<const cd> z, cd v) {
  const int m = w.base.m;
  const WeightJet wj = weight_jet(w, z);
  const double denom = wj.h0 - std::norm(v);
  if (!(denom > 0.0)) throw OutsideDisc("|v|^2 >= h at the requested point");
  const double scale = 1.0 / (denom * denom);
  MatrixXcd g(m + 1, m + 1);
  g(0, 0) = scale * wj.h0;
  for (int k = 0; k < m; ++k) g(0, 1 + k) = -scale * wj.hw(k) * std::conj(v);
  for (int j = 0; j < m; ++j) g(1 + j, 0) = -scale * wj.hz(j) * v;
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      g(1 + j, 1 + k) = scale * (-denom * wj.hzw(j, k) + wj.hz(j) * wj.hw(k));
  return g;
}

double closed_form_det(const LineBundleWeight& w, std::span<const cd> z, cd v) {
  const int m = w.base.m;
  const WeightJet wj = weight_jet(w, z);
  const double denom = wj.h0 - std::norm(v);
  if (!(denom > 0.0)) throw OutsideDisc("|v|^2 >= h at the requested point");
  MatrixXcd base_metric(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      base_metric(j, k) = (wj.hz(j) * wj.hw(k) - wj.h0 * wj.hzw(j, k)) / (wj.h0 * wj.h0);
  const double det_base = m == 0 ? 1.0 : base_metric.determinant().real();
  return std::pow(wj.h0, m + 1) / std::pow(denom, m + 2) * det_base;
}

double domination_residual(const BundleChart& b, std::span<const cd> pt) {
  const MatrixXcd g_total = metric_at(b.total, pt);
  const auto z = b.base_point(pt);
  MatrixXcd diff = g_total;
  if (b.base.m > 0) {
    const MatrixXcd g_base = metric_at(b.base, z);
    diff.block(b.fiber_rank, b.fiber_rank, b.base.m, b.base.m) -= g_base;
  }
  return min_eigenvalue(diff);
}

double ricci_identity_residual(const BundleChart& b, std::span<const cd> pt) {
  if (b.fiber_rank != 1) throw BadParams("Ricci identity residual requires fiber rank 1");
  const int m = b.base.m;
  const MatrixXcd ric_total = ricci_form_at(b.total, pt);
  const MatrixXcd g_total = metric_at(b.total, pt);
  MatrixXcd residual = ric_total + (m + 2) * g_total;
  if (m > 0) {
    const auto z = b.base_point(pt);
    const MatrixXcd g_base = metric_at(b.base, z);
    const MatrixXcd ric_base = ricci_form_at(b.base, z);
    residual.block(1, 1, m, m) -= (m + 1) * g_base + ric_base;
  }
  return max_abs(residual);
}

double hsc_formula_residual(const BundleChart& b, std::span<const cd> pt,
                            const HoloDirection& u) {
  if (b.fiber_rank != 1) throw BadParams("hsc formula residual requires fiber rank 1");
  const int m = b.base.m;
  const CurvatureTensor t_total = curvature_at(b.total, pt);
  const double norm_sq = t_total.pairing(u.x, u.x).real();
  if (!(norm_sq > kDegenerate)) throw ZeroDirection("zero direction");
  const double lhs = Q(t_total, u) / (norm_sq * norm_sq);

  const double x0 = b.x0_at(pt);
  double base_term = 0.0;
  if (m > 0) {
    const auto z = b.base_point(pt);
    const CurvatureTensor t_base = curvature_at(b.base, z);
    const VectorXcd x = u.x.tail(m);
    const double x_norm_sq = t_base.pairing(x, x).real();
    const double q_base = t_base.contract(x, x, x, x).real();
    base_term = 2.0 * x_norm_sq * x_norm_sq + q_base;
  }
  const double rhs = -2.0 + base_term / ((1.0 - x0) * norm_sq * norm_sq);
  return std::abs(lhs - rhs);
}

double sectional_formula_residual(const BundleChart& b, std::span<const cd> pt,
                                  const RealTwoPlane& plane, double s) {
  if (b.fiber_rank != 1) throw BadParams("sectional formula residual requires fiber rank 1");
  if (!(s > 0.0)) throw BadParams("normalization factor must be positive");
  const int m = b.base.m;
  const CurvatureTensor t_total = curvature_at(b.total, pt);

  // Hermitian orthonormalization of the lifts in g_D, then the factor-s
  // normalization <mu, mu>_s = 2 s |U|^2 = 1.
  const double nu = t_total.pairing(plane.x, plane.x).real();
  if (!(nu > kDegenerate)) throw DegeneratePlane("first lift vanishes");
  const VectorXcd u_hat = plane.x / std::sqrt(nu);
  const cd cross = t_total.pairing(plane.y, u_hat);
  const VectorXcd v_perp = plane.y - cross * u_hat;
  const double nv = t_total.pairing(v_perp, v_perp).real();
  if (!(nv > kDegenerate)) throw DegeneratePlane("plane is degenerate in g_D");
  const VectorXcd v_hat = v_perp / std::sqrt(nv);
  const double rescale = 1.0 / std::sqrt(2.0 * s);
  const VectorXcd u_star = rescale * u_hat;
  const VectorXcd v_star = rescale * v_hat;

  const double lhs = riemann_contraction(t_total, RealTwoPlane{u_star, v_star});

  const double x0 = b.x0_at(pt);
  double curvature_term = 0.0;
  if (m > 0) {
    const auto z = b.base_point(pt);
    const CurvatureTensor t_base = curvature_at(b.base, z);
    const RealTwoPlane projected{u_star.tail(m), v_star.tail(m)};
    const double model = model_riemann_contraction(t_base.metric(), projected, -1.0);
    const double base = riemann_contraction(t_base, projected);
    curvature_term = -2.0 * model + base;
  }
  const double rhs = -2.0 + curvature_term / (1.0 - x0);
  return std::abs(lhs - rhs);
}

double calibrate_plane_factor(std::uint64_t seed) {
  // Complex-hyperbolic base, CH normalization: the disc bundle is the model
  // case with every residual ingredient exact, which pins the factor.
  KahlerChart ball;
  ball.m = 1;
  ball.potential =
      PolarizedExpr(1, neg(log(sub(constant(1.0), mul(zvar(0), wvar(0))))));
  ball.domain = [](std::span<const cd> z) { return std::norm(z[0]) < 1.0; };
  ball.sampler = [](std::size_t, Rng& rng) {
    const double r = 0.9 * std::sqrt(rng.uniform());
    const double a = rng.uniform(0.0, 6.283185307179586);
    return std::vector<cd>{cd(r * std::cos(a), r * std::sin(a))};
  };
  ball.name = "poincare_disc";
  const BundleChart bundle = disc_bundle_chart(weight_from_chart(ball));

  const double candidates[3] = {0.5, 1.0, 2.0};
  double chosen = 0.0;
  for (double s : candidates) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
      Rng rng = substream(seed, {0xca11b7a7ull, i});
      const auto pt = bundle.total.sampler(i, rng);
      VectorXcd u(2), v(2);
      for (int j = 0; j < 2; ++j) {
        u(j) = rng.complex_normal();
        v(j) = rng.complex_normal();
      }
      worst = std::max(worst,
                       sectional_formula_residual(bundle, pt, RealTwoPlane{u, v}, s));
    }
    if (worst < 1e-8) {
      if (chosen != 0.0)
        throw Error("calibration-ambiguous", "two factors pass the model case");
      chosen = s;
    }
  }
  if (chosen == 0.0)
    throw Error("calibration-failed", "no candidate factor passes the model case");
  return chosen;
}

double fiber_ray_length(double r) {
  if (!(r >= 0.0) || r >= 1.0) throw OutOfRange("fiber ray endpoint must lie in [0, 1)");
  if (r == 0.0) return 0.0;

  KahlerChart disc;
  disc.m = 1;
  disc.potential =
      PolarizedExpr(1, neg(log(sub(constant(1.0), mul(zvar(0), wvar(0))))));
  disc.domain = [](std::span<const cd> z) { return std::norm(z[0]) < 1.0; };
  auto speed = [&disc](double t) {
    const cd z[1] = {cd(t, 0.0)};
    return std::sqrt(metric_at(disc, std::span<const cd>(z, 1))(0, 0).real());
  };

  // Adaptive Simpson with Richardson correction.
  std::function<double(double, double, double, double, double, double, int)> refine =
      [&](double a, double bb, double fa, double fm, double fb, double whole,
          int depth) -> double {
    const double mid = 0.5 * (a + bb);
    const double lm = 0.5 * (a + mid);
    const double rm = 0.5 * (mid + bb);
    const double flm = speed(lm);
    const double frm = speed(rm);
    const double left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (bb - mid) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) < 1e-13)
      return left + right + delta / 15.0;
    return refine(a, mid, fa, flm, fm, left, depth - 1) +
           refine(mid, bb, fm, frm, fb, right, depth - 1);
  };
  const double fa = speed(0.0);
  const double fb = speed(r);
  const double fm = speed(0.5 * r);
  const double whole = r / 6.0 * (fa + 4.0 * fm + fb);
  return refine(0.0, r, fa, fm, fb, whole, 48);
}

Sampler bundle_sampler(const BundleChart& b, double x0_max) {
  if (!b.base.sampler && b.base.m > 0)
    throw BadParams("base chart has no sampler");
  const int k = b.fiber_rank;
  const int m = b.base.m;
  const Sampler base_sampler = b.base.sampler;
  PolarizedExpr h_expr(m, b.h);
  return [k, m, base_sampler, h_expr, x0_max](std::size_t index, Rng& rng) {
    std::vector<cd> z =
        m == 0 ? std::vector<cd>{} : base_sampler(index, rng);
    std::vector<cd> pt(k + m);
    for (int i = 0; i < m; ++i) pt[k + i] = z[i];
    if (index % 4 == 0) return pt;  // zero-section stratum
    const double h = eval_at_conjugate(h_expr, z).real();
    const double x0 = x0_max * rng.uniform();
    // Random fiber direction scaled to sum |v_i|^2 = x0 h.
    VectorXcd dir(k);
    double norm_sq = 0.0;
    do {
      for (int i = 0; i < k; ++i) dir(i) = rng.complex_normal();
      norm_sq = dir.squaredNorm();
    } while (!(norm_sq > 1e-12));
    const double scale = std::sqrt(x0 * h / norm_sq);
    for (int i = 0; i < k; ++i) pt[i] = scale * dir(i);
    return pt;
  };
}

}  // namespace kgeom
