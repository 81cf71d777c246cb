#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kgeom {

/// Parsed run configuration. The file format is flat `key = value` lines with
/// dotted keys (two levels at most), '#' comments, and is documented in the
/// README.
struct RunConfig {
  std::string command;  // curvature | pinch | verify | models (optional in file)

  std::string model_name = "complex_hyperbolic";
  std::map<std::string, double> model_params;
  std::string custom_potential;  // model.potential, prefix expression
  int custom_dim = 0;            // model.dim, required with model.potential

  int bundle_k = 0;              // 0 = bare chart
  std::string profile_expr;      // bundle.profile, empty = -log(1 - x)

  int samples = 50;
  std::uint64_t seed = 1;
  std::string output = "-";
  std::string format = "json";

  std::string pinch_kind = "holomorphic";
  int pinch_starts = 64;

  std::map<std::string, double> tolerance_overrides;  // tolerance.<check-id>

  /// Normalized key/value echo in file order (duplicates collapse to the
  /// last occurrence), for byte-stable reports.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// Parses `key = value` text. Throws ConfigError on malformed lines or
/// unknown keys.
RunConfig parse_config_text(const std::string& text);

RunConfig parse_config_file(const std::string& path);

/// Cross-field validation (sample counts, fiber rank, total dimension,
/// tolerances). Throws ConfigError.
void validate_config(const RunConfig& config);

}  // namespace kgeom
