#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kgeom/expr.hpp"
#include "kgeom/linalg.hpp"
#include "kgeom/rng.hpp"

namespace kgeom {

/// Draws an in-domain point; `index` identifies the sample so stratified
/// samplers stay deterministic under any evaluation order.
using Sampler = std::function<std::vector<cd>(std::size_t index, Rng& rng)>;

/// A local Kahler chart: complex dimension, polarized potential in m slot
/// pairs, and a domain predicate. The metric is the complex Hessian of the
/// potential and every curvature quantity below derives from it.
struct KahlerChart {
  int m = 0;
  PolarizedExpr potential;
  std::function<bool(std::span<const cd>)> domain;
  Sampler sampler;   // optional; filled in by the model catalog
  std::string name;  // optional; reporting only
};

/// Curvature data at a point: the metric g_{j kbar} and the components
/// R_{i jbar k lbar}, i,j,k,l in 0..m-1. Sign convention: the unit-ball
/// potential -log(1-|z|^2) has holomorphic sectional curvature -2.
class CurvatureTensor {
 public:
  CurvatureTensor() = default;
  CurvatureTensor(VectorXcd point, MatrixXcd metric, std::vector<cd> components, int m)
      : point_(std::move(point)), metric_(std::move(metric)),
        components_(std::move(components)), m_(m) {}

  int dim() const { return m_; }
  const VectorXcd& point() const { return point_; }
  const MatrixXcd& metric() const { return metric_; }

  cd at(int i, int j, int k, int l) const {
    return components_[((static_cast<std::size_t>(i) * m_ + j) * m_ + k) * m_ + l];
  }

  /// Hermitian pairing H(a, b) = sum g_{j kbar} a_j conj(b_k).
  cd pairing(const VectorXcd& a, const VectorXcd& b) const;

  /// Full contraction sum R_{i jbar k lbar} a_i conj(b)_j c_k conj(d)_l.
  cd contract(const VectorXcd& a, const VectorXcd& b, const VectorXcd& c,
              const VectorXcd& d) const;

 private:
  VectorXcd point_;
  MatrixXcd metric_;
  std::vector<cd> components_;
  int m_ = 0;
};

/// A nonzero (1,0) tangent direction.
struct HoloDirection {
  VectorXcd x;
};

/// A real 2-plane encoded by (1,0) lifts: the plane is spanned by
/// x = X + conj(X), y = Y + conj(Y).
struct RealTwoPlane {
  VectorXcd x;
  VectorXcd y;
};

/// Complex Hessian of the potential at p; throws NotPositiveDefinite when the
/// chart is invalid there and DomainError outside the domain.
MatrixXcd metric_at(const KahlerChart& chart, std::span<const cd> p);

CurvatureTensor curvature_at(const KahlerChart& chart, std::span<const cd> p);

/// Q(X) = R(X, Xbar, X, Xbar); real by Hermitian symmetry.
double Q(const CurvatureTensor& t, const HoloDirection& x);

/// Holomorphic sectional curvature Q(X)/|X|_g^4.
double hsc(const CurvatureTensor& t, const HoloDirection& x);
double hsc(const KahlerChart& chart, std::span<const cd> p, const HoloDirection& x);

/// R(X, Xbar, Y, Ybar) / (|X|^2 |Y|^2).
double bisectional(const CurvatureTensor& t, const HoloDirection& x,
                   const HoloDirection& y);
double bisectional(const KahlerChart& chart, std::span<const cd> p,
                   const HoloDirection& x, const HoloDirection& y);

/// Induced real inner product of x = X + conj X and y = Y + conj Y:
/// <x, y> = 2 Re H(X, Y). This is the normalization for which the real
/// sectional curvature of the plane (x, Jx) equals the holomorphic sectional
/// curvature of X.
double real_inner(const CurvatureTensor& t, const VectorXcd& x, const VectorXcd& y);

/// Gram determinant |x ^ y|^2 = <x,x><y,y> - <x,y>^2.
double plane_gram(const CurvatureTensor& t, const RealTwoPlane& plane);

/// Real Riemann contraction R(x, y, y, x) expanded over the complexified
/// tensor: 2 Re[T(X,Y;Y,X) - T(X,Y;X,Y)]. This is the route independent of
/// the six-term Q expansion.
double riemann_contraction(const CurvatureTensor& t, const RealTwoPlane& plane);

/// Same contraction through the six-term Q polarization:
/// -1/8 Q(X+Y) - 1/8 Q(X-Y) + 3/8 Q(X+iY) + 3/8 Q(X-iY) - 1/2 Q(X) - 1/2 Q(Y).
double riemann_contraction_six_q(const CurvatureTensor& t, const RealTwoPlane& plane);

/// Sectional curvature of the plane, R(x,y,y,x) / |x ^ y|^2. Throws
/// DegeneratePlane when the Gram determinant is below 1e-14.
double real_sectional(const CurvatureTensor& t, const RealTwoPlane& plane);
double real_sectional(const KahlerChart& chart, std::span<const cd> p,
                      const RealTwoPlane& plane);

/// cos^2 of the angle between the plane and its image under J, computed on a
/// Gram-Schmidt orthonormalized basis (x normalized first).
double cos2_alpha(const MatrixXcd& metric, const RealTwoPlane& plane);

/// R(x,y,y,x) for the constant holomorphic-sectional-curvature `c` model
/// metric equal to `metric` at the point. Closed form c (ad - p^2 + 3 q^2)
/// with a = H(X,X), d = H(Y,Y), p + iq = H(X,Y).
double model_riemann_contraction(const MatrixXcd& metric, const RealTwoPlane& plane,
                                 double c);

/// Matrix of -d_j dbar_k log det g at p.
MatrixXcd ricci_form_at(const KahlerChart& chart, std::span<const cd> p);

/// (min, max) generalized eigenvalues of the Ricci matrix against the metric.
std::pair<double, double> ricci_ratio_range(const KahlerChart& chart,
                                            std::span<const cd> p);

// Residuals of the CurvatureTensor invariants; used by the verification
// suite and the property tests.
double hermitian_symmetry_residual(const CurvatureTensor& t);
double kahler_symmetry_residual(const CurvatureTensor& t);
double ricci_trace_residual(const KahlerChart& chart, std::span<const cd> p);

}  // namespace kgeom
