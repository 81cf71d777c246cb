#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "kgeom/bundle.hpp"

namespace kgeom::models {

/// Reference charts with known curvature.
///
///   complex_hyperbolic(m, c)  potential c (-log(1 - |z|^2)), hsc = -2/c
///   flat(m)                   potential |z|^2, curvature 0
///   g_omega(m)                complex_hyperbolic(m, 2), hsc = -1
///   poincare_disc             complex_hyperbolic(1, 1)
///   perturbed_ball(m, eps, seed)  ball potential plus a seeded degree-<=4
///                              Hermitian polynomial perturbation
///   polydisc_like(m)          sum of per-factor disc potentials
///   flat_weight(m)            weight h = e^{-|z|^2} over flat(m)

KahlerChart complex_hyperbolic(int m, double scale);
KahlerChart flat(int m);
KahlerChart g_omega(int m);
KahlerChart poincare_disc();
KahlerChart perturbed_ball(int m, double eps, std::uint64_t seed);
KahlerChart polydisc_like(int m);
LineBundleWeight flat_weight(int m);

using ModelResult = std::variant<KahlerChart, LineBundleWeight>;

/// Catalog lookup. Parameters: m, c (scale), eps, seed, scale (multiplies any
/// chart potential). Throws UnknownModel / BadParams.
ModelResult get_model(const std::string& name,
                      const std::map<std::string, double>& params);

struct ModelInfo {
  std::string name;
  std::string params;
  std::string summary;
};

/// Stable-ordered catalog listing for the CLI.
std::vector<ModelInfo> catalog();

/// Multiplies the potential by c > 0 (hsc scales by 1/c).
KahlerChart scale_potential(const KahlerChart& chart, double c);

}  // namespace kgeom::models
