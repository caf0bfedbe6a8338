#include "plap/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace plap {

namespace {

constexpr const char* table_header = "dim,h,best_error,eoc,p_star";
constexpr const char* sweep_header = "p,error";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("malformed number '" + s + "'");
  return v;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void expect_header(std::istream& is, const char* header) {
  std::string line;
  if (!std::getline(is, line) || strip_cr(line) != header)
    throw std::runtime_error(std::string("expected CSV header '") + header + "'");
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_table_csv(std::ostream& os, const std::vector<ExperimentRow>& rows) {
  os << table_header << '\n';
  for (const auto& r : rows)
    os << r.dim << ',' << format_real(r.h) << ',' << format_real(r.best_error) << ','
       << format_real(r.eoc) << ',' << format_real(r.p_star) << '\n';
}

std::vector<ExperimentRow> read_table_csv(std::istream& is) {
  expect_header(is, table_header);
  std::vector<ExperimentRow> rows;
  std::string line;
  while (std::getline(is, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 5) throw std::runtime_error("table row needs 5 fields: " + line);
    ExperimentRow r;
    r.dim = static_cast<std::size_t>(std::stoull(f[0]));
    r.h = parse_real(f[1]);
    r.best_error = parse_real(f[2]);
    r.eoc = parse_real(f[3]);
    r.p_star = parse_real(f[4]);
    rows.push_back(r);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const SweepCurve& curve) {
  os << sweep_header << '\n';
  for (std::size_t i = 0; i < curve.p.size(); ++i)
    os << format_real(curve.p[i]) << ',' << format_real(curve.error[i]) << '\n';
}

SweepCurve read_sweep_csv(std::istream& is) {
  expect_header(is, sweep_header);
  SweepCurve curve;
  std::string line;
  while (std::getline(is, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 2) throw std::runtime_error("sweep row needs 2 fields: " + line);
    curve.p.push_back(parse_real(f[0]));
    curve.error.push_back(parse_real(f[1]));
  }
  return curve;
}

}  // namespace plap
