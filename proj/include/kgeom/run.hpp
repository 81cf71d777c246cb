#pragma once

#include "kgeom/checks.hpp"
#include "kgeom/config.hpp"
#include "kgeom/report.hpp"

namespace kgeom {

/// Materialized run target from a config: the base chart (or weight) and the
/// bundle when a fiber rank is configured.
struct RunTarget {
  KahlerChart base;
  std::optional<LineBundleWeight> weight;
  std::optional<BundleChart> bundle;

  const KahlerChart& chart() const { return bundle ? bundle->total : base; }
};

RunTarget build_target(const RunConfig& config);

/// Executes a command ("curvature", "pinch", "verify", "models") and returns
/// the report. The command argument wins over config.command; a conflict is a
/// ConfigError.
Report run_command(const RunConfig& config, const std::string& command);

}  // namespace kgeom
