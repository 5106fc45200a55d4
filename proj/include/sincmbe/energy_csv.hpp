#pragma once

#include <string>
#include <vector>

#include "sincmbe/diagnostics.hpp"

namespace sincmbe {

// Columns: step,time,energy,modified_energy,mass,l2_norm,h2_seminorm,
// first_step_ratio. Optional fields serialize as empty cells. Floats are
// rendered with 17 significant digits, so read(write(r)) = r exactly.
void write_energy_csv(const std::vector<EnergyRecord>& records,
                      const std::string& path);

// Rejects files whose header or rows do not match the format, naming the
// offending 1-based line.
std::vector<EnergyRecord> read_energy_csv(const std::string& path);

}  // namespace sincmbe
