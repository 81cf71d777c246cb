#include "kgeom/chart.hpp"

#include <cmath>

namespace kgeom {

namespace {

constexpr double kDegenerateGram = 1e-14;
constexpr double kZeroDirectionNormSq = 1e-14;

std::vector<cd> polarized_point(std::span<const cd> p) {
  std::vector<cd> point(2 * p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    point[i] = p[i];
    point[p.size() + i] = std::conj(p[i]);
  }
  return point;
}

void require_in_domain(const KahlerChart& chart, std::span<const cd> p) {
  if (static_cast<int>(p.size()) != chart.m)
    throw BadParams("point dimension does not match the chart");
  if (chart.domain && !chart.domain(p)) throw DomainError("point outside chart domain");
}

MatrixXcd metric_from_jet(const Jet& jet, int m) {
  const JetLayout& layout = jet.layout();
  MatrixXcd g(m, m);
  std::vector<std::uint8_t> e(layout.vars());
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      std::fill(e.begin(), e.end(), 0);
      e[j] += 1;
      e[m + k] += 1;
      g(j, k) = jet.derivative(std::span<const std::uint8_t>(e));
    }
  }
  return g;
}

}  // namespace

cd CurvatureTensor::pairing(const VectorXcd& a, const VectorXcd& b) const {
  cd acc(0.0, 0.0);
  for (int j = 0; j < m_; ++j)
    for (int k = 0; k < m_; ++k) acc += metric_(j, k) * a(j) * std::conj(b(k));
  return acc;
}

cd CurvatureTensor::contract(const VectorXcd& a, const VectorXcd& b, const VectorXcd& c,
                             const VectorXcd& d) const {
  cd acc(0.0, 0.0);
  for (int i = 0; i < m_; ++i) {
    const cd ai = a(i);
    if (ai == cd(0.0, 0.0)) continue;
    for (int j = 0; j < m_; ++j) {
      const cd aibj = ai * std::conj(b(j));
      for (int k = 0; k < m_; ++k) {
        const cd aibjck = aibj * c(k);
        for (int l = 0; l < m_; ++l) acc += at(i, j, k, l) * aibjck * std::conj(d(l));
      }
    }
  }
  return acc;
}

MatrixXcd metric_at(const KahlerChart& chart, std::span<const cd> p) {
  require_in_domain(chart, p);
  const auto point = polarized_point(p);
  const Jet jet = eval_jet(chart.potential, point, 2);
  MatrixXcd g = metric_from_jet(jet, chart.m);
  cholesky_factor(g);  // positive-definiteness gate
  return g;
}

CurvatureTensor curvature_at(const KahlerChart& chart, std::span<const cd> p) {
  require_in_domain(chart, p);
  const int m = chart.m;
  const auto point = polarized_point(p);
  const Jet jet = eval_jet(chart.potential, point, 4);
  const JetLayout& layout = jet.layout();

  MatrixXcd g = metric_from_jet(jet, m);
  const MatrixXcd ginv = hermitian_inverse(g);

  // a(i,k,q) = d_{z_i} d_{z_k} d_{w_q} F  (= d_k g_{i qbar})
  std::vector<cd> a(static_cast<std::size_t>(m) * m * m);
  std::vector<std::uint8_t> e(layout.vars());
  auto deriv = [&](std::initializer_list<int> zs, std::initializer_list<int> ws) {
    std::fill(e.begin(), e.end(), 0);
    for (int z : zs) e[z] += 1;
    for (int w : ws) e[m + w] += 1;
    return jet.derivative(std::span<const std::uint8_t>(e));
  };
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      for (int q = 0; q < m; ++q)
        a[(static_cast<std::size_t>(i) * m + k) * m + q] = deriv({i, k}, {q});
  auto a_at = [&](int i, int k, int q) {
    return a[(static_cast<std::size_t>(i) * m + k) * m + q];
  };

  // R_{i jbar k lbar} = -d_k dbar_l g_{i jbar}
  //                     + sum_{p,q} ginv(q,p) (d_k g_{i qbar}) conj(d_l g_{j pbar})
  std::vector<cd> comps(static_cast<std::size_t>(m) * m * m * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < m; ++l) {
          cd value = -deriv({i, k}, {j, l});
          for (int q = 0; q < m; ++q) {
            cd inner(0.0, 0.0);
            for (int pp = 0; pp < m; ++pp)
              inner += ginv(q, pp) * std::conj(a_at(j, l, pp));
            value += a_at(i, k, q) * inner;
          }
          comps[((static_cast<std::size_t>(i) * m + j) * m + k) * m + l] = value;
        }
      }
    }
  }

  VectorXcd pt(m);
  for (int i = 0; i < m; ++i) pt(i) = p[i];
  return CurvatureTensor(std::move(pt), std::move(g), std::move(comps), m);
}

double Q(const CurvatureTensor& t, const HoloDirection& x) {
  return t.contract(x.x, x.x, x.x, x.x).real();
}

double hsc(const CurvatureTensor& t, const HoloDirection& x) {
  const double norm_sq = t.pairing(x.x, x.x).real();
  if (!(norm_sq > kZeroDirectionNormSq)) throw ZeroDirection("zero direction in hsc");
  return Q(t, x) / (norm_sq * norm_sq);
}

double hsc(const KahlerChart& chart, std::span<const cd> p, const HoloDirection& x) {
  return hsc(curvature_at(chart, p), x);
}

double bisectional(const CurvatureTensor& t, const HoloDirection& x,
                   const HoloDirection& y) {
  const double nx = t.pairing(x.x, x.x).real();
  const double ny = t.pairing(y.x, y.x).real();
  if (!(nx > kZeroDirectionNormSq) || !(ny > kZeroDirectionNormSq))
    throw ZeroDirection("zero direction in bisectional");
  return t.contract(x.x, x.x, y.x, y.x).real() / (nx * ny);
}

double bisectional(const KahlerChart& chart, std::span<const cd> p,
                   const HoloDirection& x, const HoloDirection& y) {
  return bisectional(curvature_at(chart, p), x, y);
}

double real_inner(const CurvatureTensor& t, const VectorXcd& x, const VectorXcd& y) {
  return 2.0 * t.pairing(x, y).real();
}

double plane_gram(const CurvatureTensor& t, const RealTwoPlane& plane) {
  const double xx = real_inner(t, plane.x, plane.x);
  const double yy = real_inner(t, plane.y, plane.y);
  const double xy = real_inner(t, plane.x, plane.y);
  return xx * yy - xy * xy;
}

double riemann_contraction(const CurvatureTensor& t, const RealTwoPlane& plane) {
  const cd t1 = t.contract(plane.x, plane.y, plane.y, plane.x);
  const cd t2 = t.contract(plane.x, plane.y, plane.x, plane.y);
  return 2.0 * (t1 - t2).real();
}

double riemann_contraction_six_q(const CurvatureTensor& t, const RealTwoPlane& plane) {
  const cd i_unit(0.0, 1.0);
  const VectorXcd& x = plane.x;
  const VectorXcd& y = plane.y;
  auto q_of = [&](const VectorXcd& v) { return Q(t, HoloDirection{v}); };
  return -0.125 * q_of(x + y) - 0.125 * q_of(x - y) + 0.375 * q_of(x + i_unit * y) +
         0.375 * q_of(x - i_unit * y) - 0.5 * q_of(x) - 0.5 * q_of(y);
}

double real_sectional(const CurvatureTensor& t, const RealTwoPlane& plane) {
  const double gram = plane_gram(t, plane);
  if (!(gram > kDegenerateGram)) throw DegeneratePlane("plane Gram determinant " +
                                                       std::to_string(gram));
  return riemann_contraction(t, plane) / gram;
}

double real_sectional(const KahlerChart& chart, std::span<const cd> p,
                      const RealTwoPlane& plane) {
  return real_sectional(curvature_at(chart, p), plane);
}

double cos2_alpha(const MatrixXcd& metric, const RealTwoPlane& plane) {
  auto pairing = [&](const VectorXcd& a, const VectorXcd& b) {
    cd acc(0.0, 0.0);
    for (int j = 0; j < metric.rows(); ++j)
      for (int k = 0; k < metric.cols(); ++k) acc += metric(j, k) * a(j) * std::conj(b(k));
    return acc;
  };
  // Gram-Schmidt in the induced real inner product, x first; the real
  // projection coefficient applies to the (1,0) lifts directly.
  const double xx = 2.0 * pairing(plane.x, plane.x).real();
  if (!(xx > kDegenerateGram)) throw DegeneratePlane("zero first basis vector");
  const VectorXcd xhat = plane.x / std::sqrt(xx);
  const double proj = 2.0 * pairing(plane.y, xhat).real();
  const VectorXcd yperp = plane.y - proj * xhat;
  const double yy = 2.0 * pairing(yperp, yperp).real();
  if (!(yy > kDegenerateGram)) throw DegeneratePlane("plane is degenerate");
  const VectorXcd yhat = yperp / std::sqrt(yy);
  // <xhat, J yhat> = 2 Im H(xhat, yhat)
  const double v = 2.0 * pairing(xhat, yhat).imag();
  return v * v;
}

double model_riemann_contraction(const MatrixXcd& metric, const RealTwoPlane& plane,
                                 double c) {
  auto pairing = [&](const VectorXcd& a, const VectorXcd& b) {
    cd acc(0.0, 0.0);
    for (int j = 0; j < metric.rows(); ++j)
      for (int k = 0; k < metric.cols(); ++k) acc += metric(j, k) * a(j) * std::conj(b(k));
    return acc;
  };
  const double a = pairing(plane.x, plane.x).real();
  const double d = pairing(plane.y, plane.y).real();
  const cd h = pairing(plane.x, plane.y);
  return c * (a * d - h.real() * h.real() + 3.0 * h.imag() * h.imag());
}

MatrixXcd ricci_form_at(const KahlerChart& chart, std::span<const cd> p) {
  require_in_domain(chart, p);
  const int m = chart.m;
  if (m == 0) return MatrixXcd(0, 0);
  const auto point = polarized_point(p);
  const Jet jet = eval_jet(chart.potential, point, 4);
  auto entry_layout = JetLayout::get(2 * m, 2);

  // Order-2 jets of the metric entries, then log det through an LU sweep on
  // jet-valued pivots: log det g = sum log(pivot_i).
  std::vector<Jet> entries(static_cast<std::size_t>(m) * m);
  std::vector<std::uint8_t> sigma(2 * m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      std::fill(sigma.begin(), sigma.end(), 0);
      sigma[j] += 1;
      sigma[m + k] += 1;
      entries[static_cast<std::size_t>(j) * m + k] =
          jet_derivative_jet(jet, std::span<const std::uint8_t>(sigma), entry_layout);
    }
  }
  auto at = [&](int r, int c) -> Jet& { return entries[static_cast<std::size_t>(r) * m + c]; };

  Jet logdet = Jet::constant(entry_layout, cd(0.0, 0.0));
  for (int k = 0; k < m; ++k) {
    const cd pivot_value = at(k, k).value();
    if (!(pivot_value.real() > 1e-12))
      throw NotPositiveDefinite("metric pivot is not positive during log-det sweep");
    logdet = jet_add(logdet, jet_log(at(k, k)));
    if (k + 1 == m) break;
    const Jet pivot_inv = jet_inv(at(k, k));
    for (int i = k + 1; i < m; ++i) {
      const Jet factor = jet_mul(at(i, k), pivot_inv);
      for (int c = k + 1; c < m; ++c)
        at(i, c) = jet_sub(at(i, c), jet_mul(factor, at(k, c)));
    }
  }

  MatrixXcd ric(m, m);
  std::vector<std::uint8_t> e(2 * m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      std::fill(e.begin(), e.end(), 0);
      e[j] += 1;
      e[m + k] += 1;
      ric(j, k) = -logdet.derivative(std::span<const std::uint8_t>(e));
    }
  }
  return ric;
}

std::pair<double, double> ricci_ratio_range(const KahlerChart& chart,
                                            std::span<const cd> p) {
  const MatrixXcd ric = ricci_form_at(chart, p);
  const MatrixXcd g = metric_at(chart, p);
  return generalized_eigen_range(ric, g);
}

namespace {

double component_scale(const CurvatureTensor& t) {
  const int m = t.dim();
  double scale = 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) scale = std::max(scale, std::abs(t.at(i, j, k, l)));
  return scale;
}

}  // namespace

double hermitian_symmetry_residual(const CurvatureTensor& t) {
  const int m = t.dim();
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          worst = std::max(worst,
                           std::abs(t.at(i, j, k, l) - std::conj(t.at(j, i, l, k))));
  // Relative to the largest component, so the gate means the same thing near
  // the domain margin (components ~ (1 - x)^[-2]) as at the center.
  return worst / component_scale(t);
}

double kahler_symmetry_residual(const CurvatureTensor& t) {
  const int m = t.dim();
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          worst = std::max(worst, std::abs(t.at(i, j, k, l) - t.at(k, j, i, l)));
          worst = std::max(worst, std::abs(t.at(i, j, k, l) - t.at(i, l, k, j)));
        }
  return worst / component_scale(t);
}

double ricci_trace_residual(const KahlerChart& chart, std::span<const cd> p) {
  const CurvatureTensor t = curvature_at(chart, p);
  const MatrixXcd ric = ricci_form_at(chart, p);
  const MatrixXcd ginv = hermitian_inverse(t.metric());
  const int m = t.dim();
  double worst = 0.0;
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      cd trace(0.0, 0.0);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) trace += ginv(j, i) * t.at(i, j, k, l);
      worst = std::max(worst, std::abs(trace - ric(k, l)));
    }
  }
  return worst;
}

}  // namespace kgeom
