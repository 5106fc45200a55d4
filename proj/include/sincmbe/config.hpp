#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sincmbe/models.hpp"
#include "sincmbe/schemes.hpp"

namespace sincmbe {

enum class IcKind { kTrig, kRandom, kFromFile };

struct IcSpec {
  IcKind kind = IcKind::kTrig;
  double amplitude = 0.01;
  std::uint64_t seed = 0;
  std::string path;
};

struct RunConfig {
  ModelParams model;
  SchemeConfig scheme;
  GridSpec grid;
  IcSpec ic;
  std::string output_dir = "out";
  // When true, a blowup makes the simulate/compare commands exit with
  // code 3 instead of 0.
  bool fail_on_blowup = false;
  // sweep command only.
  std::vector<double> sweep_taus;
  int sweep_refine_iters = 0;
};

// Parses the INI-style config grammar documented in the README: [section]
// headers, key = value lines, '#' comments. Unknown sections or keys are
// rejected by name, as are values violating module preconditions.
RunConfig parse_config(const std::string& path);

// Same grammar from an in-memory string; label is used in error messages.
RunConfig parse_config_text(const std::string& text, const std::string& label);

const char* to_string(ModelKind kind);
const char* to_string(SchemeKind kind);
const char* to_string(IcKind kind);
const char* to_string(ClassicalWell well);

}  // namespace sincmbe
