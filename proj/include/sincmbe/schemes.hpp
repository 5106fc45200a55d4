#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sincmbe/diagnostics.hpp"
#include "sincmbe/grid.hpp"
#include "sincmbe/models.hpp"

namespace sincmbe {

enum class SchemeKind { kImex1, kBdf2 };

struct SchemeConfig {
  SchemeKind scheme = SchemeKind::kImex1;
  double tau = 0.0;
  double t_final = 0.0;
  // Snapshot cadence in steps; 0 disables snapshots.
  std::int64_t snapshot_every = 0;
  // Record cadence in steps; step 0 and the final step are always recorded.
  std::int64_t record_every = 1;
  // Optional two-thirds-rule truncation of the explicit nonlinear term.
  // Off by default.
  bool dealias = false;

  void validate() const;
  // round(t_final / tau), floored at one step.
  std::int64_t n_steps() const;
};

struct SimState {
  RealField h_curr;
  std::optional<RealField> h_prev;
  std::int64_t step = 0;
  double time = 0.0;
};

struct SimResult {
  SimState state;
  std::vector<EnergyRecord> records;
  // True when a non-finite value appeared; state then holds the last finite
  // iterate and blowup_step the index of the first bad one.
  bool blowup = false;
  std::int64_t blowup_step = -1;
};

// One step of (h^{n+1} - h^n)/tau = -eta_sq Lap^2 h^{n+1} + div flux(grad h^n).
// The zero mode is copied bit-for-bit, so the mean is conserved exactly.
// Non-finite values propagate to the output instead of throwing.
RealField imex_step(const ModelParams& params, double tau, const RealField& h_n,
                    bool dealias = false);

// One step of the two-step scheme
//   (3h^{n+1} - 4h^n + h^{n-1})/(2 tau)
//     = -eta_sq Lap^2 h^{n+1} + 2 div flux(grad h^n) - div flux(grad h^{n-1}).
RealField bdf2_step(const ModelParams& params, double tau, const RealField& h_n,
                    const RealField& h_nm1, bool dealias = false);

// First BDF2 iterate h^1, computed with the first-order scheme. Identical to
// imex_step bit-for-bit.
RealField bootstrap_first_step(const ModelParams& params, double tau,
                               const RealField& h0, bool dealias = false);

// Advances n_steps() steps from h0, recording diagnostics. Blowup (the first
// non-finite iterate) is a reported outcome, not an error: records are
// truncated at the last finite state and the flag carries the step index.
// sink may be null.
SimResult run_simulation(const ModelParams& params, const SchemeConfig& config,
                         const RealField& h0, DiagnosticsSink* sink = nullptr);

// h0(x,y) = 0.1 (sin(3x) sin(2y) + sin(5x) sin(5y)).
RealField initial_condition_trig(GridSpec grid);

// I.i.d. uniform values in [-amplitude, amplitude], reproducible across
// platforms for a given seed. The mean is not subtracted.
RealField initial_condition_random(GridSpec grid, double amplitude,
                                   std::uint64_t seed);

}  // namespace sincmbe
