#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgeom/bundle.hpp"
#include "kgeom/report.hpp"

namespace kgeom {

struct CheckDef {
  std::string id;
  std::string anchor;
  double tolerance;
};

/// The verification checks in their fixed report order, each naming the
/// identity it exercises.
const std::vector<CheckDef>& list_checks();

struct VerifyContext {
  KahlerChart base;
  std::optional<LineBundleWeight> weight;  // set when a bundle is in play
  std::optional<BundleChart> bundle;
  int samples = 50;
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerance_overrides;
};

/// Runs every check; inapplicable ones are reported as skipped so the record
/// order is stable.
std::vector<CheckRecord> run_verify(const VerifyContext& context);

}  // namespace kgeom
