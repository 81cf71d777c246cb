#include "kgeom/pinch.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "kgeom/rng.hpp"

namespace kgeom {

namespace {

using Objective = std::function<double(const std::vector<double>&)>;
using Projector = std::function<void(std::vector<double>&)>;

void sphere_normalize(std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  s = std::sqrt(s);
  if (s > 0.0)
    for (double& v : x) v /= s;
}

/// Projected gradient descent with a central-difference gradient and
/// backtracking steps. `project` maps parameters back onto the feasible
/// representative (unit sphere for directions, orthonormal two-frame for
/// planes) after every move. Returns the minimum found; `params` is left at
/// the minimizer.
double projected_descent(const Objective& f, const Projector& project,
                         std::vector<double>& params, const PinchBudget& budget) {
  const std::size_t n = params.size();
  project(params);
  double value = f(params);
  if (!std::isfinite(value)) return value;
  std::vector<double> grad(n), trial(n);
  for (int iter = 0; iter < budget.max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      const double saved = params[i];
      params[i] = saved + budget.fd_step;
      const double up = f(params);
      params[i] = saved - budget.fd_step;
      const double down = f(params);
      params[i] = saved;
      grad[i] = (up - down) / (2.0 * budget.fd_step);
    }
    // Tangential projection: the objectives are scale invariant, so the
    // radial component is noise.
    double radial = 0.0;
    double pnorm_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      radial += grad[i] * params[i];
      pnorm_sq += params[i] * params[i];
    }
    double gnorm_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] -= (radial / pnorm_sq) * params[i];
      gnorm_sq += grad[i] * grad[i];
    }
    if (!std::isfinite(gnorm_sq) || gnorm_sq < 1e-24) break;

    double step = 0.5;
    double improvement = 0.0;
    while (step > 1e-14) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = params[i] - step * grad[i];
      project(trial);
      const double trial_value = f(trial);
      if (trial_value < value - 1e-4 * step * gnorm_sq) {
        improvement = value - trial_value;
        params = trial;
        value = trial_value;
        break;
      }
      step *= 0.5;
    }
    if (improvement < budget.improvement_tol) break;
  }
  return value;
}

std::vector<cd> params_to_vector(const std::vector<double>& params, int n, int offset) {
  std::vector<cd> v(n);
  for (int i = 0; i < n; ++i) v[i] = cd(params[offset + 2 * i], params[offset + 2 * i + 1]);
  return v;
}

struct TrackedBound {
  double value = 0.0;
  PinchWitness witness;
  bool set = false;
};

void track_min(TrackedBound& bound, double value, const PinchWitness& witness) {
  if (!bound.set || value < bound.value) {
    bound.value = value;
    bound.witness = witness;
    bound.set = true;
  }
}

void track_max(TrackedBound& bound, double value, const PinchWitness& witness) {
  if (!bound.set || value > bound.value) {
    bound.value = value;
    bound.witness = witness;
    bound.set = true;
  }
}

PinchBounds finish(TrackedBound lo, TrackedBound hi, CurvKind kind) {
  if (!lo.set || !hi.set)
    throw Error("estimation-empty", "no admissible sample produced a curvature value");
  PinchBounds out;
  out.lower = lo.value;
  out.upper = hi.value;
  out.kind = kind;
  out.lower_witness = lo.witness;
  out.upper_witness = hi.witness;
  return out;
}

/// Shared multi-start driver over per-point curvature functionals.
PinchBounds run_estimator(const KahlerChart& chart, const Sampler& sampler, int points,
                          const PinchBudget& budget, std::uint64_t seed, CurvKind kind,
                          int params_per_start,
                          const std::function<Objective(const CurvatureTensor&)>& make_objective,
                          const std::function<Projector(const CurvatureTensor&)>& make_projector,
                          const std::function<PinchWitness(const CurvatureTensor&,
                                                           const std::vector<double>&)>& make_witness) {
  if (points < 1) throw BadParams("need at least one sample point");
  if (budget.starts < 1) throw BadParams("need at least one start per point");
  if (!sampler) throw BadParams("estimator needs a sampler");
  TrackedBound lo, hi;
  for (int p = 0; p < points; ++p) {
    Rng point_rng = substream(seed, {0x706f696e74ull, static_cast<std::uint64_t>(p)});
    const std::vector<cd> point = sampler(static_cast<std::size_t>(p), point_rng);
    const CurvatureTensor tensor = curvature_at(chart, point);
    const Objective objective = make_objective(tensor);
    const Projector projector = make_projector(tensor);
    Objective negated = [&objective](const std::vector<double>& x) { return -objective(x); };
    for (int s = 0; s < budget.starts; ++s) {
      Rng rng = substream(seed, {0x7374617274ull, static_cast<std::uint64_t>(p),
                                 static_cast<std::uint64_t>(s)});
      std::vector<double> start(params_per_start);
      for (double& v : start) v = rng.normal();
      std::vector<double> x = start;
      const double minimum = projected_descent(objective, projector, x, budget);
      if (std::isfinite(minimum)) {
        PinchWitness w = make_witness(tensor, x);
        w.point_index = static_cast<std::size_t>(p);
        w.point = point;
        track_min(lo, minimum, w);
      }
      x = start;
      const double maximum = -projected_descent(negated, projector, x, budget);
      if (std::isfinite(maximum)) {
        PinchWitness w = make_witness(tensor, x);
        w.point_index = static_cast<std::size_t>(p);
        w.point = point;
        track_max(hi, maximum, w);
      }
    }
  }
  return finish(lo, hi, kind);
}

}  // namespace

std::string curv_kind_name(CurvKind kind) {
  switch (kind) {
    case CurvKind::holomorphic: return "holomorphic";
    case CurvKind::sectional: return "sectional";
    case CurvKind::bisectional: return "bisectional";
    case CurvKind::ricci: return "ricci";
  }
  return "unknown";
}

double PinchBounds::delta() const {
  if (!(lower < 0.0) || !(upper < 0.0))
    throw NotNegativelyPinched("delta undefined unless both bounds are negative");
  return upper / lower;
}

PinchBounds estimate_hsc_bounds(const KahlerChart& chart, const Sampler& sampler,
                                int points, const PinchBudget& budget,
                                std::uint64_t seed) {
  const int n = chart.m;
  auto make_objective = [n](const CurvatureTensor& tensor) -> Objective {
    return [&tensor, n](const std::vector<double>& params) {
      VectorXcd x(n);
      for (int i = 0; i < n; ++i) x(i) = cd(params[2 * i], params[2 * i + 1]);
      const double norm_sq = tensor.pairing(x, x).real();
      if (!(norm_sq > 1e-14)) return std::numeric_limits<double>::infinity();
      const double q = tensor.contract(x, x, x, x).real();
      return q / (norm_sq * norm_sq);
    };
  };
  auto make_projector = [](const CurvatureTensor&) -> Projector {
    return sphere_normalize;
  };
  auto make_witness = [n](const CurvatureTensor&, const std::vector<double>& params) {
    PinchWitness w;
    w.direction = params_to_vector(params, n, 0);
    return w;
  };
  return run_estimator(chart, sampler, points, budget, seed, CurvKind::holomorphic,
                       2 * n, make_objective, make_projector, make_witness);
}

PinchBounds estimate_sectional_bounds(const KahlerChart& chart, const Sampler& sampler,
                                      int points, const PinchBudget& budget,
                                      std::uint64_t seed) {
  const int n = chart.m;
  auto make_objective = [n](const CurvatureTensor& tensor) -> Objective {
    return [&tensor, n](const std::vector<double>& params) {
      RealTwoPlane plane;
      plane.x = VectorXcd(n);
      plane.y = VectorXcd(n);
      for (int i = 0; i < n; ++i) {
        plane.x(i) = cd(params[2 * i], params[2 * i + 1]);
        plane.y(i) = cd(params[2 * n + 2 * i], params[2 * n + 2 * i + 1]);
      }
      const double gram = plane_gram(tensor, plane);
      if (!(gram > 1e-10)) return std::numeric_limits<double>::infinity();
      return riemann_contraction(tensor, plane) / gram;
    };
  };
  // Two-frame projection: Gram-Schmidt in the induced real inner product,
  // first lift normalized first.
  auto make_projector = [n](const CurvatureTensor& tensor) -> Projector {
    return [&tensor, n](std::vector<double>& params) {
      VectorXcd x(n), y(n);
      for (int i = 0; i < n; ++i) {
        x(i) = cd(params[2 * i], params[2 * i + 1]);
        y(i) = cd(params[2 * n + 2 * i], params[2 * n + 2 * i + 1]);
      }
      const double xx = 2.0 * tensor.pairing(x, x).real();
      if (!(xx > 1e-14)) return;  // leave degenerate frames to the objective filter
      x /= std::sqrt(xx);
      y -= 2.0 * tensor.pairing(y, x).real() * x;
      const double yy = 2.0 * tensor.pairing(y, y).real();
      if (!(yy > 1e-14)) return;
      y /= std::sqrt(yy);
      for (int i = 0; i < n; ++i) {
        params[2 * i] = x(i).real();
        params[2 * i + 1] = x(i).imag();
        params[2 * n + 2 * i] = y(i).real();
        params[2 * n + 2 * i + 1] = y(i).imag();
      }
    };
  };
  auto make_witness = [n](const CurvatureTensor&, const std::vector<double>& params) {
    PinchWitness w;
    w.direction = params_to_vector(params, n, 0);
    w.second_direction = params_to_vector(params, n, 2 * n);
    return w;
  };
  return run_estimator(chart, sampler, points, budget, seed, CurvKind::sectional,
                       4 * n, make_objective, make_projector, make_witness);
}

PinchBounds estimate_bisectional_bounds(const KahlerChart& chart, const Sampler& sampler,
                                        int points, const PinchBudget& budget,
                                        std::uint64_t seed) {
  const int n = chart.m;
  auto make_objective = [n](const CurvatureTensor& tensor) -> Objective {
    return [&tensor, n](const std::vector<double>& params) {
      VectorXcd x(n), y(n);
      for (int i = 0; i < n; ++i) {
        x(i) = cd(params[2 * i], params[2 * i + 1]);
        y(i) = cd(params[2 * n + 2 * i], params[2 * n + 2 * i + 1]);
      }
      const double nx = tensor.pairing(x, x).real();
      const double ny = tensor.pairing(y, y).real();
      if (!(nx > 1e-14) || !(ny > 1e-14))
        return std::numeric_limits<double>::infinity();
      return tensor.contract(x, x, y, y).real() / (nx * ny);
    };
  };
  auto make_projector = [](const CurvatureTensor&) -> Projector {
    return sphere_normalize;
  };
  auto make_witness = [n](const CurvatureTensor&, const std::vector<double>& params) {
    PinchWitness w;
    w.direction = params_to_vector(params, n, 0);
    w.second_direction = params_to_vector(params, n, 2 * n);
    return w;
  };
  return run_estimator(chart, sampler, points, budget, seed, CurvKind::bisectional,
                       4 * n, make_objective, make_projector, make_witness);
}

PinchBounds estimate_ricci_bounds(const KahlerChart& chart, const Sampler& sampler,
                                  int points, std::uint64_t seed) {
  if (points < 1) throw BadParams("need at least one sample point");
  if (!sampler) throw BadParams("estimator needs a sampler");
  TrackedBound lo, hi;
  for (int p = 0; p < points; ++p) {
    Rng rng = substream(seed, {0x706f696e74ull, static_cast<std::uint64_t>(p)});
    const std::vector<cd> point = sampler(static_cast<std::size_t>(p), rng);
    const auto [mn, mx] = ricci_ratio_range(chart, point);
    PinchWitness w;
    w.point_index = static_cast<std::size_t>(p);
    w.point = point;
    track_min(lo, mn, w);
    track_max(hi, mx, w);
  }
  return finish(lo, hi, CurvKind::ricci);
}

std::pair<double, double> hsc_bound_transfer(double c1, double c2) {
  if (c1 > c2) throw BadParams("need C1 <= C2");
  if (!(c2 < 0.0)) throw NotNegativelyPinched("upper bound must be negative");
  return {std::min(-2.0, c1), std::max(-2.0, c2)};
}

std::pair<double, double> sect_bound_transfer(double c1, double c2) {
  if (c1 > c2) throw BadParams("need c1 <= c2");
  if (!(c2 < 0.0)) throw NotNegativelyPinched("upper bound must be negative");
  return {std::min(-2.0, -1.5 + c1), std::max(-2.0, c2)};
}

double holo_pinch_transfer(double a, double delta) {
  if (!(a > 0.0) || !(delta > 0.0) || delta > 1.0)
    throw OutOfRange("need A > 0 and delta in (0, 1]");
  if (a >= 2.0 && delta <= 2.0 / a) return delta;
  if (a >= 2.0) return 2.0 / a;
  return delta * a / 2.0;
}

double sect_pinch_transfer(double a, double delta) {
  if (!(a > 0.0) || !(delta > 0.0) || delta > 1.0)
    throw OutOfRange("need A > 0 and delta in (0, 1]");
  const double threshold = std::min(1.0, 2.0 / a);
  if (a >= 0.5 && delta <= threshold) return delta * a / (a + 1.5);
  if (a >= 0.5) return 2.0 / (a + 1.5);
  return delta * a / 2.0;
}

std::pair<double, double> holo_to_sectional(double a, double delta) {
  if (!(a > 0.0) || !(delta > 0.0) || delta > 1.0)
    throw OutOfRange("need A > 0 and delta in (0, 1]");
  if (delta <= 2.0 / 3.0)
    throw DeltaTooSmall("the relation needs delta > 2/3");
  return {-a, -0.25 * (3.0 * delta - 2.0) * a};
}

double angle_model_sectional(double c, double alpha) {
  const double cosine = std::cos(alpha);
  return c / 4.0 * (1.0 + 3.0 * cosine * cosine);
}

}  // namespace kgeom
