#include "qzs/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "qzs/errors.hpp"

namespace qzs {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

double parse_real(const std::string& s, const std::string& path, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw IoError(path + ":" + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
  std::ofstream out = open_out(path);
  out << kDiagnosticsHeader << '\n';
  for (const auto& r : records) {
    out << format_real(r.t) << ',' << format_real(r.mass) << ',' << format_real(r.energy) << ','
        << format_real(r.rm) << ',' << format_real(r.rh) << ',';
    if (r.q_defect) out << format_real(*r.q_defect);
    out << ',' << r.fp_iterations << '\n';
  }
  finish(out, path);
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticsHeader) {
    throw IoError(path + ": missing or unexpected diagnostics header");
  }
  std::vector<DiagnosticsRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 7) throw IoError(path + ":" + std::to_string(lineno) + ": expected 7 columns");
    DiagnosticsRecord r;
    r.t = parse_real(cells[0], path, lineno);
    r.mass = parse_real(cells[1], path, lineno);
    r.energy = parse_real(cells[2], path, lineno);
    r.rm = parse_real(cells[3], path, lineno);
    r.rh = parse_real(cells[4], path, lineno);
    if (!cells[5].empty()) r.q_defect = parse_real(cells[5], path, lineno);
    r.fp_iterations = static_cast<int>(parse_real(cells[6], path, lineno));
    out.push_back(r);
  }
  return out;
}

void write_report_csv(const ConvergenceReport& report, const std::string& path) {
  std::ofstream out = open_out(path);
  out << kReportHeader << '\n';
  for (std::size_t k = 0; k < report.params.size(); ++k) {
    out << to_string(report.axis) << ',' << report.stages << ',' << k << ',' << format_real(report.params[k]) << ','
        << format_real(report.errors[k].e) << ',' << format_real(report.errors[k].n) << ',';
    if (k > 0) out << format_real(report.rates_e[k - 1]) << ',' << format_real(report.rates_n[k - 1]);
    else out << ',';
    out << '\n';
  }
  finish(out, path);
}

void write_table_csv(const std::string& header, const std::vector<std::vector<double>>& columns,
                     const std::string& path) {
  std::ofstream out = open_out(path);
  out << header << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw ShapeError("write_table_csv: columns differ in length");
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out << ',';
      out << format_real(columns[j][i]);
    }
    out << '\n';
  }
  finish(out, path);
}

}  // namespace qzs
