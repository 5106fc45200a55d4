#pragma once

#include <cstdint>
#include <string>

#include "sincmbe/grid.hpp"

namespace sincmbe {

struct Snapshot {
  RealField field;
  std::int64_t step = 0;
  double time = 0.0;
};

// Binary field snapshot, little-endian:
//   magic "MBEF" | version u32 | nx u32 | ny u32 | time f64 | step u64
//   payload: nx*ny f64 values, row-major.
// Round-trips bit-exactly.
void write_snapshot(const RealField& field, std::int64_t step, double time,
                    const std::string& path);

// Rejects bad magic, unknown version, invalid grid sizes, and short payloads.
Snapshot read_snapshot(const std::string& path);

}  // namespace sincmbe
