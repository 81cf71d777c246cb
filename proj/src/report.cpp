#include "kgeom/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>

#include "kgeom/errors.hpp"

namespace kgeom {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::size_t Report::failed_checks() const {
  std::size_t failed = 0;
  for (const CheckRecord& c : checks)
    if (!c.skipped && !c.pass) ++failed;
  return failed;
}

namespace {

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

void write_number_array(std::ostream& out, const std::vector<double>& values) {
  out << '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << format_double(values[i]);
  }
  out << ']';
}

}  // namespace

void write_json(const Report& report, std::ostream& out) {
  out << "{\n";
  out << "  \"engine\": {\"name\": \"" << kEngineName << "\", \"version\": \""
      << kEngineVersion << "\", \"kernel\": \"" << escape_json(report.kernel) << "\"},\n";
  out << "  \"command\": \"" << escape_json(report.command) << "\",\n";
  out << "  \"seed\": " << report.seed << ",\n";
  out << "  \"config\": [";
  for (std::size_t i = 0; i < report.config_echo.size(); ++i) {
    if (i) out << ", ";
    out << "{\"key\": \"" << escape_json(report.config_echo[i].first) << "\", \"value\": \""
        << escape_json(report.config_echo[i].second) << "\"}";
  }
  out << "]";

  if (!report.checks.empty()) {
    out << ",\n  \"checks\": [\n";
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
      const CheckRecord& c = report.checks[i];
      out << "    {\"id\": \"" << escape_json(c.id) << "\", \"anchor\": \""
          << escape_json(c.anchor) << "\", \"samples\": " << c.samples
          << ", \"max_residual\": " << format_double(c.max_residual)
          << ", \"tolerance\": " << format_double(c.tolerance)
          << ", \"pass\": " << (c.pass ? "true" : "false")
          << ", \"skipped\": " << (c.skipped ? "true" : "false") << ", \"witness\": \""
          << escape_json(c.witness) << "\"}";
      out << (i + 1 < report.checks.size() ? ",\n" : "\n");
    }
    out << "  ],\n";
    out << "  \"summary\": {\"total\": " << report.checks.size()
        << ", \"failed\": " << report.failed_checks()
        << ", \"pass\": " << (report.all_passed() ? "true" : "false") << "}";
  }

  if (!report.rows.empty()) {
    out << ",\n  \"rows\": [\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const CurvatureRow& r = report.rows[i];
      out << "    {\"point_index\": " << r.point_index << ", \"coordinates\": ";
      write_number_array(out, r.coordinates);
      out << ", \"kind\": \"" << escape_json(r.kind)
          << "\", \"value\": " << format_double(r.value) << ", \"witness\": ";
      write_number_array(out, r.witness);
      out << "}" << (i + 1 < report.rows.size() ? ",\n" : "\n");
    }
    out << "  ]";
  }

  if (report.pinch) {
    const PinchSection& p = *report.pinch;
    out << ",\n  \"pinch\": {\"kind\": \"" << escape_json(p.kind)
        << "\", \"lower\": " << format_double(p.lower)
        << ", \"upper\": " << format_double(p.upper) << ", \"points\": " << p.points
        << ", \"starts\": " << p.starts << ",\n    \"lower_witness\": {\"point\": ";
    write_number_array(out, p.lower_witness_point);
    out << ", \"direction\": ";
    write_number_array(out, p.lower_witness_direction);
    out << "},\n    \"upper_witness\": {\"point\": ";
    write_number_array(out, p.upper_witness_point);
    out << ", \"direction\": ";
    write_number_array(out, p.upper_witness_direction);
    out << "}}";
  }

  if (!report.models.empty()) {
    out << ",\n  \"models\": [\n";
    for (std::size_t i = 0; i < report.models.size(); ++i) {
      const ModelRow& m = report.models[i];
      out << "    {\"name\": \"" << escape_json(m.name) << "\", \"params\": \""
          << escape_json(m.params) << "\", \"summary\": \"" << escape_json(m.summary)
          << "\"}" << (i + 1 < report.models.size() ? ",\n" : "\n");
    }
    out << "  ]";
  }

  out << "\n}\n";
}

void write_csv(const Report& report, std::ostream& out) {
  if (!report.checks.empty()) {
    out << "check_id,anchor,samples,max_residual,tolerance,pass,skipped\n";
    for (const CheckRecord& c : report.checks) {
      out << c.id << ',' << c.anchor << ',' << c.samples << ','
          << format_double(c.max_residual) << ',' << format_double(c.tolerance) << ','
          << (c.pass ? "true" : "false") << ',' << (c.skipped ? "true" : "false") << '\n';
    }
    return;
  }
  if (!report.rows.empty()) {
    std::size_t coord_count = 0;
    std::size_t witness_count = 0;
    for (const CurvatureRow& r : report.rows) {
      coord_count = std::max(coord_count, r.coordinates.size());
      witness_count = std::max(witness_count, r.witness.size());
    }
    out << "point_index";
    for (std::size_t i = 0; i < coord_count; i += 2)
      out << ",coord_" << i / 2 << "_re,coord_" << i / 2 << "_im";
    out << ",kind,value";
    for (std::size_t i = 0; i < witness_count; i += 2)
      out << ",witness_" << i / 2 << "_re,witness_" << i / 2 << "_im";
    out << '\n';
    for (const CurvatureRow& r : report.rows) {
      out << r.point_index;
      for (std::size_t i = 0; i < coord_count; ++i)
        out << ',' << (i < r.coordinates.size() ? format_double(r.coordinates[i]) : "");
      out << ',' << r.kind << ',' << format_double(r.value);
      for (std::size_t i = 0; i < witness_count; ++i)
        out << ',' << (i < r.witness.size() ? format_double(r.witness[i]) : "");
      out << '\n';
    }
    return;
  }
  if (report.pinch) {
    const PinchSection& p = *report.pinch;
    out << "kind,lower,upper,points,starts\n";
    out << p.kind << ',' << format_double(p.lower) << ',' << format_double(p.upper) << ','
        << p.points << ',' << p.starts << '\n';
    return;
  }
  if (!report.models.empty()) {
    out << "name,params,summary\n";
    for (const ModelRow& m : report.models)
      out << m.name << ",\"" << m.params << "\",\"" << m.summary << "\"\n";
    return;
  }
  out << "empty\n";
}

void write_report(const Report& report, const std::string& path, const std::string& format) {
  auto emit = [&](std::ostream& out) {
    if (format == "csv")
      write_csv(report, out);
    else
      write_json(report, out);
  };
  if (path == "-") {
    emit(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io-error", "cannot open output path '" + path + "'");
  emit(out);
}

}  // namespace kgeom
