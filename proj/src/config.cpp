#include "sincmbe/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sincmbe {

namespace {

[[noreturn]] void fail(const std::string& label, const std::string& msg) {
  throw std::runtime_error(label + ": " + msg);
}

std::string trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing comment: '#' at the start of the line or preceded by
// whitespace. A '#' glued to a value is kept, so paths survive.
std::string strip_comment(const std::string& s) {
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '#' && (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t')) {
      return s.substr(0, i);
    }
  }
  return s;
}

// section -> key -> (value, consumed flag)
using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

class ConfigReader {
 public:
  ConfigReader(SectionMap raw, std::string label)
      : raw_(std::move(raw)), label_(std::move(label)) {}

  bool has(const std::string& section, const std::string& key) {
    auto s = raw_.find(section);
    if (s == raw_.end()) return false;
    return s->second.count(key) > 0;
  }

  std::string take(const std::string& section, const std::string& key) {
    consumed_[section].insert(key);
    return raw_.at(section).at(key);
  }

  std::string require(const std::string& section, const std::string& key) {
    if (!has(section, key)) {
      fail(label_, "missing required key '" + key + "' in [" + section + "]");
    }
    return take(section, key);
  }

  double take_double(const std::string& section, const std::string& key) {
    const std::string v = take(section, key);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') {
      fail(label_, "[" + section + "] " + key + ": not a number: '" + v + "'");
    }
    return x;
  }

  double require_double(const std::string& section, const std::string& key) {
    require(section, key);
    return take_double(section, key);
  }

  std::int64_t take_int(const std::string& section, const std::string& key) {
    const std::string v = take(section, key);
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') {
      fail(label_, "[" + section + "] " + key + ": not an integer: '" + v + "'");
    }
    return x;
  }

  bool take_bool(const std::string& section, const std::string& key) {
    const std::string v = take(section, key);
    if (v == "true") return true;
    if (v == "false") return false;
    fail(label_, "[" + section + "] " + key + ": expected true or false, got '" +
                     v + "'");
  }

  // Every key must have been consumed by the schema; leftovers are typos.
  void reject_unknown(const std::set<std::string>& known_sections) {
    for (const auto& [section, keys] : raw_) {
      if (known_sections.count(section) == 0) {
        fail(label_, "unknown section [" + section + "]");
      }
      for (const auto& [key, value] : keys) {
        if (consumed_[section].count(key) == 0) {
          fail(label_, "unknown key '" + key + "' in [" + section + "]");
        }
      }
    }
  }

  const std::string& label() const { return label_; }

 private:
  SectionMap raw_;
  std::string label_;
  std::map<std::string, std::set<std::string>> consumed_;
};

SectionMap read_sections(std::istream& in, const std::string& label) {
  SectionMap out;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']' || body.size() < 3) {
        fail(label, "line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(body.substr(1, body.size() - 2));
      out[section];
      continue;
    }
    const size_t eq = body.find('=');
    if (eq == std::string::npos) {
      fail(label, "line " + std::to_string(lineno) + ": expected key = value");
    }
    if (section.empty()) {
      fail(label, "line " + std::to_string(lineno) + ": key outside any section");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) {
      fail(label, "line " + std::to_string(lineno) + ": empty key");
    }
    if (out[section].count(key) > 0) {
      fail(label, "line " + std::to_string(lineno) + ": duplicate key '" + key +
                      "' in [" + section + "]");
    }
    out[section][key] = value;
  }
  return out;
}

ModelKind parse_model_kind(ConfigReader& r, const std::string& v) {
  if (v == "sinc") return ModelKind::kSincIsotropic;
  if (v == "classical") return ModelKind::kClassicalSlopeSelection;
  if (v == "square") return ModelKind::kSquareSymmetry;
  if (v == "linear") return ModelKind::kLinearOnly;
  fail(r.label(), "[model] kind: expected sinc|classical|square|linear, got '" +
                      v + "'");
}

RunConfig build_config(ConfigReader& r) {
  RunConfig cfg;

  cfg.model.kind = parse_model_kind(r, r.require("model", "kind"));
  cfg.model.eta_sq = r.require_double("model", "eta_sq");
  if (!(cfg.model.eta_sq > 0.0)) {
    fail(r.label(), "[model] eta_sq: must be > 0");
  }
  if (r.has("model", "beta")) {
    cfg.model.beta = r.take_double("model", "beta");
    if (!(cfg.model.beta > 0.0)) fail(r.label(), "[model] beta: must be > 0");
  }
  if (r.has("model", "beta1")) {
    cfg.model.beta1 = r.take_double("model", "beta1");
  }
  if (r.has("model", "classical_well")) {
    const std::string v = r.take("model", "classical_well");
    if (v == "unit") {
      cfg.model.classical_well = ClassicalWell::kUnitSlope;
    } else if (v == "scaled_six") {
      cfg.model.classical_well = ClassicalWell::kScaledSix;
    } else {
      fail(r.label(),
           "[model] classical_well: expected unit or scaled_six, got '" + v +
               "'");
    }
  }

  int nx = 0, ny = 0;
  if (r.has("grid", "n")) {
    nx = ny = static_cast<int>(r.take_int("grid", "n"));
  }
  if (r.has("grid", "nx")) nx = static_cast<int>(r.take_int("grid", "nx"));
  if (r.has("grid", "ny")) ny = static_cast<int>(r.take_int("grid", "ny"));
  if (nx == 0 || ny == 0) {
    fail(r.label(), "[grid] requires n, or nx and ny");
  }
  try {
    cfg.grid = GridSpec(nx, ny);
  } catch (const std::exception& e) {
    fail(r.label(), std::string("[grid] ") + e.what());
  }

  const std::string scheme = r.require("scheme", "kind");
  if (scheme == "imex") {
    cfg.scheme.scheme = SchemeKind::kImex1;
  } else if (scheme == "bdf2") {
    cfg.scheme.scheme = SchemeKind::kBdf2;
  } else {
    fail(r.label(), "[scheme] kind: expected imex or bdf2, got '" + scheme + "'");
  }
  cfg.scheme.tau = r.require_double("scheme", "tau");
  if (!(cfg.scheme.tau > 0.0)) fail(r.label(), "[scheme] tau: must be > 0");
  cfg.scheme.t_final = r.require_double("scheme", "t_final");
  if (!(cfg.scheme.t_final > 0.0)) {
    fail(r.label(), "[scheme] t_final: must be > 0");
  }
  if (r.has("scheme", "record_every")) {
    cfg.scheme.record_every = r.take_int("scheme", "record_every");
    if (cfg.scheme.record_every < 1) {
      fail(r.label(), "[scheme] record_every: must be >= 1");
    }
  }
  if (r.has("scheme", "snapshot_every")) {
    cfg.scheme.snapshot_every = r.take_int("scheme", "snapshot_every");
    if (cfg.scheme.snapshot_every < 0) {
      fail(r.label(), "[scheme] snapshot_every: must be >= 0");
    }
  }
  if (r.has("scheme", "dealias")) {
    cfg.scheme.dealias = r.take_bool("scheme", "dealias");
  }
  if (r.has("scheme", "fail_on_blowup")) {
    cfg.fail_on_blowup = r.take_bool("scheme", "fail_on_blowup");
  }

  const std::string ic = r.require("ic", "kind");
  if (ic == "trig") {
    cfg.ic.kind = IcKind::kTrig;
  } else if (ic == "random") {
    cfg.ic.kind = IcKind::kRandom;
  } else if (ic == "file") {
    cfg.ic.kind = IcKind::kFromFile;
  } else {
    fail(r.label(), "[ic] kind: expected trig|random|file, got '" + ic + "'");
  }
  if (r.has("ic", "amplitude")) {
    cfg.ic.amplitude = r.take_double("ic", "amplitude");
    if (!(cfg.ic.amplitude > 0.0)) {
      fail(r.label(), "[ic] amplitude: must be > 0");
    }
  }
  if (r.has("ic", "seed")) {
    cfg.ic.seed = static_cast<std::uint64_t>(r.take_int("ic", "seed"));
  }
  if (r.has("ic", "path")) {
    cfg.ic.path = r.take("ic", "path");
  }
  if (cfg.ic.kind == IcKind::kFromFile && cfg.ic.path.empty()) {
    fail(r.label(), "[ic] path: required when kind = file");
  }

  if (r.has("output", "dir")) {
    cfg.output_dir = r.take("output", "dir");
  }

  if (r.has("sweep", "taus")) {
    std::stringstream ss(r.take("sweep", "taus"));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (t.empty()) fail(r.label(), "[sweep] taus: empty entry");
      char* end = nullptr;
      const double x = std::strtod(t.c_str(), &end);
      if (end == t.c_str() || *end != '\0' || !(x > 0.0)) {
        fail(r.label(), "[sweep] taus: bad entry '" + t + "'");
      }
      cfg.sweep_taus.push_back(x);
    }
    for (size_t i = 1; i < cfg.sweep_taus.size(); ++i) {
      if (!(cfg.sweep_taus[i] > cfg.sweep_taus[i - 1])) {
        fail(r.label(), "[sweep] taus: must be strictly increasing");
      }
    }
  }
  if (r.has("sweep", "refine_iters")) {
    cfg.sweep_refine_iters = static_cast<int>(r.take_int("sweep", "refine_iters"));
    if (cfg.sweep_refine_iters < 0) {
      fail(r.label(), "[sweep] refine_iters: must be >= 0");
    }
  }

  r.reject_unknown({"model", "grid", "scheme", "ic", "output", "sweep"});
  return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& label) {
  std::istringstream in(text);
  ConfigReader reader(read_sections(in, label), label);
  return build_config(reader);
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open config file");
  }
  ConfigReader reader(read_sections(in, path), path);
  return build_config(reader);
}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kSincIsotropic: return "sinc";
    case ModelKind::kClassicalSlopeSelection: return "classical";
    case ModelKind::kSquareSymmetry: return "square";
    case ModelKind::kLinearOnly: return "linear";
  }
  return "?";
}

const char* to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kImex1: return "imex";
    case SchemeKind::kBdf2: return "bdf2";
  }
  return "?";
}

const char* to_string(IcKind kind) {
  switch (kind) {
    case IcKind::kTrig: return "trig";
    case IcKind::kRandom: return "random";
    case IcKind::kFromFile: return "file";
  }
  return "?";
}

const char* to_string(ClassicalWell well) {
  switch (well) {
    case ClassicalWell::kUnitSlope: return "unit";
    case ClassicalWell::kScaledSix: return "scaled_six";
  }
  return "?";
}

}  // namespace sincmbe
