#include "kgeom/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kgeom/errors.hpp"

namespace kgeom {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("key '" + key + "' expects a number, got '" + value + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v != static_cast<long long>(v))
    throw ConfigError("key '" + key + "' expects an integer, got '" + value + "'");
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError("key '" + key + "' expects a 64-bit integer, got '" + value + "'");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::map<std::string, std::string> seen;
  std::vector<std::string> order;

  std::istringstream stream(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_number) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_number) + ": empty key or value");
    if (!seen.count(key)) order.push_back(key);
    seen[key] = value;
  }

  for (const std::string& key : order) {
    const std::string& value = seen[key];
    if (key == "command") {
      config.command = value;
    } else if (key == "model.name") {
      config.model_name = value;
    } else if (key == "model.potential") {
      config.custom_potential = value;
    } else if (key == "model.dim") {
      config.custom_dim = parse_int(key, value);
    } else if (key.rfind("model.", 0) == 0) {
      config.model_params[key.substr(6)] = parse_double(key, value);
    } else if (key == "bundle.k") {
      config.bundle_k = parse_int(key, value);
    } else if (key == "bundle.profile") {
      config.profile_expr = value;
    } else if (key == "samples") {
      config.samples = parse_int(key, value);
    } else if (key == "seed") {
      config.seed = parse_u64(key, value);
    } else if (key == "output") {
      config.output = value;
    } else if (key == "format") {
      config.format = value;
    } else if (key == "pinch.kind") {
      config.pinch_kind = value;
    } else if (key == "pinch.starts") {
      config.pinch_starts = parse_int(key, value);
    } else if (key.rfind("tolerance.", 0) == 0) {
      config.tolerance_overrides[key.substr(10)] = parse_double(key, value);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
    config.echo.emplace_back(key, value);
  }
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void validate_config(const RunConfig& config) {
  if (!config.command.empty() && config.command != "curvature" &&
      config.command != "pinch" && config.command != "verify" && config.command != "models")
    throw ConfigError("command must be one of curvature|pinch|verify|models");
  if (config.samples < 1) throw ConfigError("samples must be >= 1");
  if (config.bundle_k != 0 && (config.bundle_k < 1 || config.bundle_k > 3))
    throw ConfigError("bundle.k must lie in [1, 3]");
  if (config.format != "json" && config.format != "csv")
    throw ConfigError("format must be json or csv");
  if (config.pinch_kind != "holomorphic" && config.pinch_kind != "sectional" &&
      config.pinch_kind != "bisectional" && config.pinch_kind != "ricci")
    throw ConfigError("pinch.kind must be holomorphic|sectional|bisectional|ricci");
  if (config.pinch_starts < 1) throw ConfigError("pinch.starts must be >= 1");
  for (const auto& [key, value] : config.tolerance_overrides)
    if (!(value > 0.0)) throw ConfigError("tolerance." + key + " must be positive");
  if (!config.custom_potential.empty() && config.custom_dim < 1)
    throw ConfigError("model.potential requires model.dim >= 1");

  int m = config.custom_dim;
  if (config.custom_potential.empty()) {
    const auto it = config.model_params.find("m");
    m = it == config.model_params.end()
            ? (config.model_name == "poincare_disc" || config.model_name == "flat_weight" ||
                       config.model_name == "complex_hyperbolic" ||
                       config.model_name == "perturbed_ball" || config.model_name == "flat"
                   ? 1
                   : 2)
            : static_cast<int>(it->second);
  }
  if (m + std::max(config.bundle_k, 0) > 6)
    throw ConfigError("total dimension m + k must be <= 6");
}

}  // namespace kgeom
