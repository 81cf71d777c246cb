#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kgeom/config.hpp"

namespace kgeom {

inline constexpr const char* kEngineName = "kgeom";
inline constexpr const char* kEngineVersion = "1.0.0";

/// Formats a double in decimal with 17 significant digits (round-trip safe
/// and byte-stable).
std::string format_double(double value);

struct CheckRecord {
  std::string id;
  std::string anchor;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool skipped = false;
  std::string witness;  // short description of the worst sample
};

struct CurvatureRow {
  std::size_t point_index = 0;
  std::vector<double> coordinates;  // re/im interleaved
  std::string kind;
  double value = 0.0;
  std::vector<double> witness;  // re/im interleaved direction data
};

struct PinchSection {
  std::string kind;
  double lower = 0.0;
  double upper = 0.0;
  int points = 0;
  int starts = 0;
  std::vector<double> lower_witness_point;
  std::vector<double> lower_witness_direction;
  std::vector<double> upper_witness_point;
  std::vector<double> upper_witness_direction;
};

struct ModelRow {
  std::string name;
  std::string params;
  std::string summary;
};

/// Machine-readable run report; serialization is byte-stable for a fixed
/// config and seed.
struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::string kernel;  // active arithmetic kernel
  std::vector<std::pair<std::string, std::string>> config_echo;

  std::vector<CheckRecord> checks;       // verify
  std::vector<CurvatureRow> rows;        // curvature
  std::optional<PinchSection> pinch;     // pinch
  std::vector<ModelRow> models;          // models

  std::size_t failed_checks() const;
  bool all_passed() const { return failed_checks() == 0; }
};

void write_json(const Report& report, std::ostream& out);
void write_csv(const Report& report, std::ostream& out);

/// Writes to `path` ("-" = stdout) in the requested format.
void write_report(const Report& report, const std::string& path, const std::string& format);

}  // namespace kgeom
