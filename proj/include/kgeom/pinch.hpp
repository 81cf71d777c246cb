#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kgeom/chart.hpp"

namespace kgeom {

enum class CurvKind { holomorphic, sectional, bisectional, ricci };

std::string curv_kind_name(CurvKind kind);

struct PinchWitness {
  std::size_t point_index = 0;
  std::vector<cd> point;
  std::vector<cd> direction;         // first direction / plane lift
  std::vector<cd> second_direction;  // plane kinds only
};

/// Estimated curvature bounds. Inner estimates: lower >= true inf and
/// upper <= true sup; lower <= upper always.
struct PinchBounds {
  double lower = 0.0;
  double upper = 0.0;
  CurvKind kind = CurvKind::holomorphic;
  PinchWitness lower_witness;
  PinchWitness upper_witness;

  /// upper/lower when both bounds are negative.
  double delta() const;
};

struct PinchBudget {
  int starts = 64;
  int max_iterations = 200;
  double fd_step = 1e-5;
  double improvement_tol = 1e-10;
};

/// Multi-start projected gradient over unit (1,0) directions at each sampled
/// point. Deterministic for a fixed seed; each (point, start) draws from its
/// own substream, so enlarging the budget never shrinks the interval.
PinchBounds estimate_hsc_bounds(const KahlerChart& chart, const Sampler& sampler,
                                int points, const PinchBudget& budget,
                                std::uint64_t seed);

/// Multi-start optimization over two-frames spanning real 2-planes,
/// Gram-Schmidt projected each step; degenerate planes are filtered.
PinchBounds estimate_sectional_bounds(const KahlerChart& chart, const Sampler& sampler,
                                      int points, const PinchBudget& budget,
                                      std::uint64_t seed);

PinchBounds estimate_bisectional_bounds(const KahlerChart& chart, const Sampler& sampler,
                                        int points, const PinchBudget& budget,
                                        std::uint64_t seed);

/// Per-point Ricci/metric eigenvalue range swept over the samples; no
/// direction optimization is involved.
PinchBounds estimate_ricci_bounds(const KahlerChart& chart, const Sampler& sampler,
                                  int points, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Exact transfer tables for the disc bundle over a base with holomorphic
// sectional curvature in [C1, C2] (resp. sectional in [c1, c2]).

/// (min{-2, C1}, max{-2, C2}); requires C1 <= C2 < 0.
std::pair<double, double> hsc_bound_transfer(double c1, double c2);

/// (min{-2, -3/2 + c1}, max{-2, c2}); requires c1 <= c2 < 0.
std::pair<double, double> sect_bound_transfer(double c1, double c2);

/// Pinching-constant map for holomorphic pinching, cases evaluated in listed
/// order: A >= 2 and delta <= 2/A -> delta; A >= 2 -> 2/A; A < 2 -> delta A/2.
double holo_pinch_transfer(double a, double delta);

/// Pinching-constant map for sectional pinching with threshold min{1, 2/A}:
/// A >= 1/2 and delta <= min{1, 2/A} -> delta A/(A + 3/2);
/// A >= 1/2 -> 2/(A + 3/2); A < 1/2 -> delta A/2.
double sect_pinch_transfer(double a, double delta);

/// From holomorphic pinching [-A, -delta A] with delta > 2/3 to the sectional
/// range (-A, -1/4 (3 delta - 2) A). Throws DeltaTooSmall at delta <= 2/3.
std::pair<double, double> holo_to_sectional(double a, double delta);

/// Sectional curvature of a plane at angle alpha in a space of constant
/// holomorphic sectional curvature c: (c/4)(1 + 3 cos^2 alpha).
double angle_model_sectional(double c, double alpha);

}  // namespace kgeom
