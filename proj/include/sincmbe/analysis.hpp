#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "sincmbe/diagnostics.hpp"
#include "sincmbe/grid.hpp"
#include "sincmbe/models.hpp"
#include "sincmbe/schemes.hpp"

namespace sincmbe {

struct DissipationReport {
  bool holds = true;
  // Step value (from the record) of the first entry whose energy exceeds its
  // predecessor by at least tol.
  std::optional<std::int64_t> first_violation_step;
  // Largest consecutive increase seen, negative when the energy always drops.
  double max_increase = 0.0;
  double tol = 1e-12;
};

// Scans consecutive record pairs for increases >= tol in energy (or
// modified_energy when use_modified). Requires >= 2 records; with
// use_modified, every record must carry a modified energy. A non-finite
// increase (NaN) counts as a violation.
DissipationReport check_dissipation(const std::vector<EnergyRecord>& records,
                                    bool use_modified, double tol = 1e-12);

struct SweepProbe {
  double tau = 0.0;
  DissipationReport report;
};

struct SweepResult {
  // Largest tested tau where dissipation holds below the failure threshold;
  // absent when every probe fails.
  std::optional<double> tau_lo;
  // Smallest tested tau where dissipation fails; absent when every probe
  // holds (open bracket, no fabricated bound).
  std::optional<double> tau_hi;
  std::vector<SweepProbe> trace;
};

// Brackets the critical time step: runs a full simulation per tau in
// tau_list (strictly increasing), every probe sharing h0, t_final, and
// record_every = 1, then bisects the bracketing pair up to refine_iters
// times, stopping early once the bracket is narrower than 5% of tau_lo.
// Probes run concurrently when hardware allows; the result is deterministic
// for fixed inputs. A probe that blows up counts as a failed tau.
SweepResult find_tau_c(const ModelParams& params, SchemeKind scheme,
                       GridSpec grid, const RealField& h0, double t_final,
                       const std::vector<double>& tau_list, int refine_iters,
                       double tol = 1e-12);

struct BoundednessSummary {
  double sup_l2 = 0.0;
  double sup_h2 = 0.0;
  // Least-squares slope of l2_norm against time over the final half of the
  // records; near zero for bounded dynamics.
  double trend = 0.0;
  // True when any monitored value is non-finite (blown-up run).
  bool nonfinite = false;
};

// Requires >= 10 records.
BoundednessSummary boundedness_monitor(const std::vector<EnergyRecord>& records);

// Per-mode symbols of T = (3 + tau Lap^2)^{-1} and the root pair of
// lambda^2 - 4 t_hat lambda + t_hat = 0:
//   t_hat >= 1/4:  t_pm = 2 (t_hat +- sqrt(t_hat^2 - t_hat/4))   (real)
//   t_hat <  1/4:  t_pm = 2 (t_hat +- i sqrt(t_hat/4 - t_hat^2)) (complex,
//                  |t_pm| = sqrt(t_hat)).
// Arrays are in FFT storage order; the k = 0 entries are zero and excluded
// from theta0 (mean-zero reduction).
struct MultiplierSpec {
  double tau = 0.0;
  GridSpec grid;
  std::vector<double> t_hat;
  std::vector<std::complex<double>> t_plus;
  std::vector<std::complex<double>> t_minus;
  // max over nonzero modes of max(|t_plus|, |t_minus|), strictly below 1.
  double theta0 = 0.0;
};

MultiplierSpec build_multipliers(double tau, GridSpec grid);

struct RecurrenceReport {
  double theta0 = 0.0;
  // Forced run: ||u^{n+1} - T_minus u^n|| <= theta0 ||u^n - T_minus u^{n-1}||
  //             + A0 at every step.
  bool contraction_ok = false;
  // Zero-forcing run: geometric decay ||r^n|| <= theta0^n ||r^0||.
  bool decay_ok = false;
  // Forced run: sup ||u^n|| <= (||u^1 - T_minus u^0|| + A0/(1-theta0))
  //             / (1-theta0) + ||u^0||.
  bool sup_bound_ok = false;
  double sup_norm = 0.0;
  double sup_bound = 0.0;

  bool ok() const { return contraction_ok && decay_ok && sup_bound_ok; }
};

// Iterates the normalized linear recurrence
//   (3u^{n+1} - 4u^n + u^{n-1})/tau = -Lap^2 u^{n+1} + div f^n
// spectrally (so u^{n+1} = T(4u^n - u^{n-1} + tau div f^n)) from random
// mean-zero u^0, u^1 with random forcing normalized to ||f^n|| = A0 = 1, and
// checks the per-step contraction, the zero-forcing geometric decay, and the
// closed sup bound. Note the coefficient 3/tau here versus 3/(2 tau) in the
// BDF2 scheme; the recurrence is stated in the normalized form and the two
// differ only by rescaling tau.
RecurrenceReport verify_recurrence_contraction(double tau, GridSpec grid,
                                               int n_steps, std::uint64_t seed);

struct LemmaReport {
  // max over samples of hessian_quadratic_form(z, x) / |x|^2.
  double max_hessian_ratio = 0.0;
  // max over samples of |g(x) - g(y)| / |x - y|.
  double max_lipschitz_ratio = 0.0;
  std::int64_t n_samples = 0;
};

// Samples random (z, x) and (x, y) pairs in the ball of the given radius and
// reports the worst-case ratios, both bounded by 1 up to round-off. The
// adversarial pair z = (pi, 0), x = (1, 0), where the Hessian bound is
// attained, is always included; coincident pairs x = y are skipped.
LemmaReport lemma_sampler(std::int64_t n_samples, double radius,
                          std::uint64_t seed);

}  // namespace sincmbe
