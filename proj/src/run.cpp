#include "kgeom/run.hpp"

#include <cmath>

#include "kgeom/kernels.hpp"
#include "kgeom/models.hpp"
#include "kgeom/pinch.hpp"
#include "kgeom/rng.hpp"

namespace kgeom {

namespace {

std::vector<double> interleave(std::span<const cd> values) {
  std::vector<double> out;
  out.reserve(2 * values.size());
  for (const cd& v : values) {
    out.push_back(v.real());
    out.push_back(v.imag());
  }
  return out;
}

std::vector<double> interleave(const VectorXcd& values) {
  return interleave(std::span<const cd>(values.data(), values.size()));
}

VectorXcd random_unit(Rng& rng, int n) {
  VectorXcd x(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) x(i) = rng.complex_normal();
    norm = x.norm();
  } while (!(norm > 1e-8));
  return x / norm;
}

KahlerChart custom_chart(const RunConfig& config) {
  const int m = config.custom_dim;
  Ex root = parse_expr(config.custom_potential);
  if (max_pair_index(root) >= m)
    throw ConfigError("model.potential uses a slot pair beyond model.dim");
  KahlerChart chart;
  chart.m = m;
  chart.potential = PolarizedExpr(m, root);
  chart.domain = [m](std::span<const cd> z) { return static_cast<int>(z.size()) == m; };
  chart.sampler = [m](std::size_t, Rng& rng) {
    std::vector<cd> z(m);
    for (int i = 0; i < m; ++i)
      z[i] = cd(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4));
    return z;
  };
  chart.name = "custom";
  return chart;
}

}  // namespace

RunTarget build_target(const RunConfig& config) {
  RunTarget target;
  if (!config.custom_potential.empty()) {
    target.base = custom_chart(config);
  } else {
    auto result = models::get_model(config.model_name, config.model_params);
    if (std::holds_alternative<LineBundleWeight>(result)) {
      LineBundleWeight w = std::get<LineBundleWeight>(std::move(result));
      if (config.bundle_k < 1)
        throw ConfigError("model '" + config.model_name + "' is a weight; set bundle.k >= 1");
      target.base = w.base;
      target.weight = std::move(w);
    } else {
      target.base = std::get<KahlerChart>(std::move(result));
    }
  }
  if (config.bundle_k >= 1) {
    if (!target.weight) target.weight = weight_from_chart(target.base);
    if (config.profile_expr.empty() || config.bundle_k > 1) {
      if (!config.profile_expr.empty())
        throw ConfigError("bundle.profile is only supported for bundle.k = 1");
      target.bundle = ball_bundle_chart(*target.weight, config.bundle_k);
    } else {
      CalabiProfile profile{parse_expr(config.profile_expr)};
      target.bundle = general_calabi_chart(*target.weight, profile);
    }
  }
  return target;
}

namespace {

Report base_report(const RunConfig& config, const std::string& command) {
  Report report;
  report.command = command;
  report.seed = config.seed;
  report.kernel = kernels::kind_name(kernels::active());
  report.config_echo = config.echo;
  return report;
}

Report run_curvature(const RunConfig& config) {
  Report report = base_report(config, "curvature");
  const RunTarget target = build_target(config);
  const KahlerChart& chart = target.chart();
  if (!chart.sampler) throw ConfigError("curvature command needs a sampled model");
  const int n = chart.m;
  for (int i = 0; i < config.samples; ++i) {
    Rng point_rng = substream(config.seed, {0x63757276ull, static_cast<std::uint64_t>(i)});
    const auto pt = chart.sampler(static_cast<std::size_t>(i), point_rng);
    const auto coords = interleave(std::span<const cd>(pt.data(), pt.size()));
    Rng rng = substream(config.seed, {0x64697273ull, static_cast<std::uint64_t>(i)});
    const CurvatureTensor tensor = curvature_at(chart, pt);

    CurvatureRow hsc_row;
    hsc_row.point_index = static_cast<std::size_t>(i);
    hsc_row.coordinates = coords;
    hsc_row.kind = "hsc";
    const HoloDirection dir{random_unit(rng, n)};
    hsc_row.value = hsc(tensor, dir);
    hsc_row.witness = interleave(dir.x);
    report.rows.push_back(std::move(hsc_row));

    CurvatureRow sect_row;
    sect_row.point_index = static_cast<std::size_t>(i);
    sect_row.coordinates = coords;
    sect_row.kind = "sectional";
    const RealTwoPlane plane{random_unit(rng, n), random_unit(rng, n)};
    sect_row.value = real_sectional(tensor, plane);
    sect_row.witness = interleave(plane.x);
    const auto second = interleave(plane.y);
    sect_row.witness.insert(sect_row.witness.end(), second.begin(), second.end());
    report.rows.push_back(std::move(sect_row));

    const auto [ric_lo, ric_hi] = ricci_ratio_range(chart, pt);
    CurvatureRow lo_row;
    lo_row.point_index = static_cast<std::size_t>(i);
    lo_row.coordinates = coords;
    lo_row.kind = "ricci_min";
    lo_row.value = ric_lo;
    report.rows.push_back(std::move(lo_row));
    CurvatureRow hi_row;
    hi_row.point_index = static_cast<std::size_t>(i);
    hi_row.coordinates = coords;
    hi_row.kind = "ricci_max";
    hi_row.value = ric_hi;
    report.rows.push_back(std::move(hi_row));
  }
  return report;
}

Report run_pinch(const RunConfig& config) {
  Report report = base_report(config, "pinch");
  const RunTarget target = build_target(config);
  const KahlerChart& chart = target.chart();
  if (!chart.sampler) throw ConfigError("pinch command needs a sampled model");

  PinchBudget budget;
  budget.starts = config.pinch_starts;
  PinchBounds bounds;
  if (config.pinch_kind == "holomorphic")
    bounds = estimate_hsc_bounds(chart, chart.sampler, config.samples, budget, config.seed);
  else if (config.pinch_kind == "sectional")
    bounds = estimate_sectional_bounds(chart, chart.sampler, config.samples, budget,
                                       config.seed);
  else if (config.pinch_kind == "bisectional")
    bounds = estimate_bisectional_bounds(chart, chart.sampler, config.samples, budget,
                                         config.seed);
  else
    bounds = estimate_ricci_bounds(chart, chart.sampler, config.samples, config.seed);

  PinchSection section;
  section.kind = curv_kind_name(bounds.kind);
  section.lower = bounds.lower;
  section.upper = bounds.upper;
  section.points = config.samples;
  section.starts = config.pinch_starts;
  section.lower_witness_point = interleave(
      std::span<const cd>(bounds.lower_witness.point.data(), bounds.lower_witness.point.size()));
  section.lower_witness_direction = interleave(std::span<const cd>(
      bounds.lower_witness.direction.data(), bounds.lower_witness.direction.size()));
  section.upper_witness_point = interleave(
      std::span<const cd>(bounds.upper_witness.point.data(), bounds.upper_witness.point.size()));
  section.upper_witness_direction = interleave(std::span<const cd>(
      bounds.upper_witness.direction.data(), bounds.upper_witness.direction.size()));
  report.pinch = std::move(section);
  return report;
}

Report run_verify(const RunConfig& config) {
  Report report = base_report(config, "verify");
  RunConfig effective = config;
  if (effective.bundle_k == 0) effective.bundle_k = 1;
  const RunTarget target = build_target(effective);

  VerifyContext context;
  context.base = target.base;
  context.weight = target.weight;
  context.bundle = target.bundle;
  context.samples = config.samples;
  context.seed = config.seed;
  context.tolerance_overrides = config.tolerance_overrides;
  report.checks = kgeom::run_verify(context);
  return report;
}

Report run_models(const RunConfig& config) {
  Report report = base_report(config, "models");
  for (const auto& info : models::catalog())
    report.models.push_back({info.name, info.params, info.summary});
  return report;
}

}  // namespace

Report run_command(const RunConfig& config, const std::string& command) {
  if (!config.command.empty() && !command.empty() && config.command != command)
    throw ConfigError("config command '" + config.command + "' conflicts with CLI command '" +
                      command + "'");
  const std::string effective = command.empty() ? config.command : command;
  if (effective == "curvature") return run_curvature(config);
  if (effective == "pinch") return run_pinch(config);
  if (effective == "verify") return run_verify(config);
  if (effective == "models") return run_models(config);
  throw ConfigError("no command given; expected curvature|pinch|verify|models");
}

}  // namespace kgeom
