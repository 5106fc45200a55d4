#include "sincmbe/schemes.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "internal.hpp"
#include "sincmbe/spectral.hpp"

namespace sincmbe {

void SchemeConfig::validate() const {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("SchemeConfig: tau must be positive");
  }
  if (!(t_final > 0.0)) {
    throw std::invalid_argument("SchemeConfig: t_final must be positive");
  }
  if (snapshot_every < 0) {
    throw std::invalid_argument("SchemeConfig: snapshot_every must be >= 0");
  }
  if (record_every < 1) {
    throw std::invalid_argument("SchemeConfig: record_every must be >= 1");
  }
}

std::int64_t SchemeConfig::n_steps() const {
  return std::max<std::int64_t>(1, std::llround(t_final / tau));
}

namespace {

using detail::odd_wavenumber;

// Spectrum of div flux(grad h) from the spectrum of h: inverse-transform the
// two derivative spectra, apply the flux pointwise, transform back, and
// contract with ik. Everything unchecked so non-finite values flow through.
SpectralField flux_divergence_spectrum(const ModelParams& params,
                                       const SpectralField& f, bool dealias) {
  const GridSpec g = f.grid();
  SpectralField gx(g), gy(g);
  for (int i = 0; i < g.nx; ++i) {
    const double k1 = odd_wavenumber(i, g.nx);
    for (int j = 0; j < g.ny; ++j) {
      const double k2 = odd_wavenumber(j, g.ny);
      const std::complex<double> c = f.at(i, j);
      gx.at(i, j) = std::complex<double>(-k1 * c.imag(), k1 * c.real());
      gy.at(i, j) = std::complex<double>(-k2 * c.imag(), k2 * c.real());
    }
  }
  VectorField grad{detail::inverse_unchecked(gx), detail::inverse_unchecked(gy)};
  const VectorField flx = flux(params, grad);
  SpectralField fx = detail::forward_unchecked(flx.x);
  SpectralField fy = detail::forward_unchecked(flx.y);
  SpectralField d(g);
  for (int i = 0; i < g.nx; ++i) {
    const double k1 = odd_wavenumber(i, g.nx);
    for (int j = 0; j < g.ny; ++j) {
      const double k2 = odd_wavenumber(j, g.ny);
      const std::complex<double> cx = fx.at(i, j);
      const std::complex<double> cy = fy.at(i, j);
      d.at(i, j) = std::complex<double>(-k1 * cx.imag() - k2 * cy.imag(),
                                        k1 * cx.real() + k2 * cy.real());
    }
  }
  d.at(0, 0) = 0.0;
  if (dealias) dealias_truncate(d);
  return d;
}

void require_step_args(const ModelParams& params, double tau) {
  params.validate();
  if (!(tau > 0.0)) {
    throw std::invalid_argument("time step: tau must be positive");
  }
}

}  // namespace

RealField imex_step(const ModelParams& params, double tau, const RealField& h_n,
                    bool dealias) {
  require_step_args(params, tau);
  const GridSpec g = h_n.grid();
  SpectralField f = detail::forward_unchecked(h_n);
  const SpectralField d = flux_divergence_spectrum(params, f, dealias);
  const WaveNumbers wn(g);
  SpectralField u(g);
  for (int m = 0; m < g.size(); ++m) {
    u.data()[m] =
        (f.data()[m] + tau * d.data()[m]) / (1.0 + tau * params.eta_sq * wn.kquad[m]);
  }
  // The divergence has no zero mode, so the scheme fixes the mean; copying
  // the coefficient makes that exact in floating point as well.
  u.at(0, 0) = f.at(0, 0);
  return detail::inverse_unchecked(u);
}

RealField bdf2_step(const ModelParams& params, double tau, const RealField& h_n,
                    const RealField& h_nm1, bool dealias) {
  require_step_args(params, tau);
  if (!(h_n.grid() == h_nm1.grid())) {
    throw std::invalid_argument("bdf2_step: history grids differ");
  }
  const GridSpec g = h_n.grid();
  SpectralField f_n = detail::forward_unchecked(h_n);
  SpectralField f_nm1 = detail::forward_unchecked(h_nm1);
  const SpectralField d_n = flux_divergence_spectrum(params, f_n, dealias);
  const SpectralField d_nm1 = flux_divergence_spectrum(params, f_nm1, dealias);
  const WaveNumbers wn(g);
  SpectralField u(g);
  for (int m = 0; m < g.size(); ++m) {
    const std::complex<double> rhs =
        4.0 * f_n.data()[m] - f_nm1.data()[m] +
        2.0 * tau * (2.0 * d_n.data()[m] - d_nm1.data()[m]);
    u.data()[m] = rhs / (3.0 + 2.0 * tau * params.eta_sq * wn.kquad[m]);
  }
  // Zero mode: (4a - b)/3 written as a + (a - b)/3, which is exact when the
  // two history means already coincide.
  const std::complex<double> a = f_n.at(0, 0);
  const std::complex<double> b = f_nm1.at(0, 0);
  u.at(0, 0) = a + (a - b) / 3.0;
  return detail::inverse_unchecked(u);
}

RealField bootstrap_first_step(const ModelParams& params, double tau,
                               const RealField& h0, bool dealias) {
  return imex_step(params, tau, h0, dealias);
}

namespace {

EnergyRecord make_record(const ModelParams& params, const SchemeConfig& config,
                         const RealField& h, const RealField* h_prev,
                         std::int64_t step, double time) {
  EnergyRecord rec;
  rec.step = step;
  rec.time = time;
  rec.energy = total_energy(params, h);
  rec.mass = integrate(h);
  rec.l2_norm = norm_l2(h);
  rec.h2_seminorm = seminorm_h2(h);
  if (h_prev != nullptr && config.scheme == SchemeKind::kBdf2) {
    rec.modified_energy =
        modified_energy_bdf2(params, h, *h_prev, config.tau);
  }
  if (h_prev != nullptr && step == 1) {
    RealField diff(h.grid());
    for (int m = 0; m < h.size(); ++m) {
      diff.values()[m] = h.values()[m] - h_prev->values()[m];
    }
    const double d = norm_l2(diff);
    rec.first_step_ratio = d * d / config.tau;
  }
  return rec;
}

}  // namespace

SimResult run_simulation(const ModelParams& params, const SchemeConfig& config,
                         const RealField& h0, DiagnosticsSink* sink) {
  params.validate();
  config.validate();
  if (!h0.all_finite()) {
    throw std::invalid_argument("run_simulation: initial datum is not finite");
  }
  const std::int64_t n_steps = config.n_steps();
  const bool bdf2 = config.scheme == SchemeKind::kBdf2;

  SimResult result;
  result.state.h_curr = h0;
  result.state.step = 0;
  result.state.time = 0.0;

  auto wants_record = [&](std::int64_t step) {
    return step % config.record_every == 0 || step == n_steps;
  };
  auto wants_snapshot = [&](std::int64_t step) {
    return config.snapshot_every > 0 &&
           (step % config.snapshot_every == 0 || step == n_steps);
  };
  auto emit = [&](const EnergyRecord& rec) {
    result.records.push_back(rec);
    if (sink != nullptr) sink->on_record(rec);
  };

  emit(make_record(params, config, h0, nullptr, 0, 0.0));
  if (wants_snapshot(0) && sink != nullptr) sink->on_snapshot(h0, 0, 0.0);

  // h_prev is kept one step back for BDF2 history, the modified energy, and
  // the first-step ratio; for IMEX it is dropped from the returned state.
  RealField h_prev;
  for (std::int64_t step = 1; step <= n_steps; ++step) {
    RealField h_next;
    if (bdf2 && step >= 2) {
      h_next = bdf2_step(params, config.tau, result.state.h_curr, h_prev,
                         config.dealias);
    } else if (bdf2) {
      h_next = bootstrap_first_step(params, config.tau, result.state.h_curr,
                                    config.dealias);
    } else {
      h_next =
          imex_step(params, config.tau, result.state.h_curr, config.dealias);
    }
    if (!h_next.all_finite()) {
      result.blowup = true;
      result.blowup_step = step;
      break;
    }
    h_prev = std::move(result.state.h_curr);
    result.state.h_curr = std::move(h_next);
    result.state.step = step;
    result.state.time = step * config.tau;
    if (wants_record(step)) {
      emit(make_record(params, config, result.state.h_curr, &h_prev, step,
                       result.state.time));
    }
    if (wants_snapshot(step) && sink != nullptr) {
      sink->on_snapshot(result.state.h_curr, step, result.state.time);
    }
  }
  if (bdf2 && result.state.step >= 1) {
    result.state.h_prev = std::move(h_prev);
  }
  return result;
}

RealField initial_condition_trig(GridSpec grid) {
  RealField h(grid);
  for (int i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    for (int j = 0; j < grid.ny; ++j) {
      const double y = grid.y(j);
      h(i, j) = 0.1 * (std::sin(3.0 * x) * std::sin(2.0 * y) +
                       std::sin(5.0 * x) * std::sin(5.0 * y));
    }
  }
  return h;
}

RealField initial_condition_random(GridSpec grid, double amplitude,
                                   std::uint64_t seed) {
  if (!(amplitude > 0.0)) {
    throw std::invalid_argument(
        "initial_condition_random: amplitude must be positive");
  }
  RealField h(grid);
  // Raw 53-bit draws mapped to [-amplitude, amplitude), bypassing
  // std::uniform_real_distribution whose output is implementation-defined.
  std::mt19937_64 gen(seed);
  constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
  for (double& v : h.values()) {
    const double u = static_cast<double>(gen() >> 11) * kInv53;
    v = amplitude * (2.0 * u - 1.0);
  }
  return h;
}

}  // namespace sincmbe
