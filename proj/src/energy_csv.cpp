#include "sincmbe/energy_csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

namespace sincmbe {

namespace {

constexpr const char* kHeader =
    "step,time,energy,modified_energy,mass,l2_norm,h2_seminorm,"
    "first_step_ratio";

// 17 significant digits round-trip any binary64 value exactly.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v.has_value() ? fmt(*v) : std::string();
}

[[noreturn]] void fail(const std::string& path, int line,
                       const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& path, int line, const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    fail(path, line, "bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void write_energy_csv(const std::vector<EnergyRecord>& records,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path + ": cannot open for writing");
  }
  out << kHeader << '\n';
  for (const EnergyRecord& r : records) {
    out << r.step << ',' << fmt(r.time) << ',' << fmt(r.energy) << ','
        << fmt_opt(r.modified_energy) << ',' << fmt(r.mass) << ','
        << fmt(r.l2_norm) << ',' << fmt(r.h2_seminorm) << ','
        << fmt_opt(r.first_step_ratio) << '\n';
  }
  if (!out) {
    throw std::runtime_error(path + ": write failed");
  }
}

std::vector<EnergyRecord> read_energy_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open");
  }
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) {
    fail(path, 1, "empty file, header expected");
  }
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    fail(path, 1, "unexpected header");
  }

  std::vector<EnergyRecord> records;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    size_t start = 0;
    while (true) {
      const size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (cells.size() != 8) {
      fail(path, lineno,
           "expected 8 fields, got " + std::to_string(cells.size()));
    }
    EnergyRecord r;
    {
      char* end = nullptr;
      r.step = std::strtoll(cells[0].c_str(), &end, 10);
      if (end == cells[0].c_str() || *end != '\0') {
        fail(path, lineno, "bad step '" + cells[0] + "'");
      }
    }
    r.time = parse_double(path, lineno, cells[1]);
    r.energy = parse_double(path, lineno, cells[2]);
    if (!cells[3].empty()) {
      r.modified_energy = parse_double(path, lineno, cells[3]);
    }
    r.mass = parse_double(path, lineno, cells[4]);
    r.l2_norm = parse_double(path, lineno, cells[5]);
    r.h2_seminorm = parse_double(path, lineno, cells[6]);
    if (!cells[7].empty()) {
      r.first_step_ratio = parse_double(path, lineno, cells[7]);
    }
    records.push_back(r);
  }
  return records;
}

}  // namespace sincmbe
