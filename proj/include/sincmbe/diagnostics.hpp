#pragma once

#include <cstdint>
#include <optional>

#include "sincmbe/grid.hpp"

namespace sincmbe {

// One row of the per-run energy log.
struct EnergyRecord {
  std::int64_t step = 0;
  double time = 0.0;
  // E_n = eta_sq/2 ||Laplacian h||^2 + integral of W(grad h).
  double energy = 0.0;
  // BDF2 two-step energy, absent for IMEX runs and at step 0.
  std::optional<double> modified_energy;
  // integral of h = mean * 4 pi^2, conserved by both schemes.
  double mass = 0.0;
  double l2_norm = 0.0;
  double h2_seminorm = 0.0;
  // (1/tau) ||h^1 - h^0||^2, present only at step 1.
  std::optional<double> first_step_ratio;
};

// Streaming consumer for run output. Default callbacks discard everything,
// so subclasses override only what they need. Called from the run's own
// thread of control.
class DiagnosticsSink {
 public:
  virtual ~DiagnosticsSink() = default;
  virtual void on_record(const EnergyRecord&) {}
  virtual void on_snapshot(const RealField&, std::int64_t /*step*/,
                           double /*time*/) {}
};

}  // namespace sincmbe
