#include "sincmbe/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "internal.hpp"

namespace sincmbe {
namespace {

using detail::KahanSum;
using detail::odd_wavenumber;

// The FFTW planner is not thread-safe; plan creation and destruction are
// serialized globally. Plan execution on private buffers is safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Per-thread FFTW state for one grid size: half-spectrum r2c/c2r plans and
// their buffers. Each simulation thread builds its own set, so execution
// never crosses threads.
class Workspace {
 public:
  explicit Workspace(GridSpec grid) : grid_(grid) {
    const int nx = grid.nx, ny = grid.ny;
    np_ = nx * (ny / 2 + 1);
    rbuf_ = fftw_alloc_real(static_cast<size_t>(nx) * ny);
    cbuf_ = fftw_alloc_complex(static_cast<size_t>(np_));
    if (rbuf_ == nullptr || cbuf_ == nullptr) {
      throw std::bad_alloc();
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_ESTIMATE keeps planning deterministic (FFTW_MEASURE picks the
    // algorithm by timing, which can change results between runs).
    r2c_ = fftw_plan_dft_r2c_2d(nx, ny, rbuf_, cbuf_, FFTW_ESTIMATE);
    c2r_ = fftw_plan_dft_c2r_2d(nx, ny, cbuf_, rbuf_, FFTW_ESTIMATE);
    if (r2c_ == nullptr || c2r_ == nullptr) {
      throw std::runtime_error("FFTW plan creation failed");
    }
  }

  ~Workspace() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (r2c_ != nullptr) fftw_destroy_plan(r2c_);
    if (c2r_ != nullptr) fftw_destroy_plan(c2r_);
    fftw_free(rbuf_);
    fftw_free(cbuf_);
  }

  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  // Real field -> full-spectrum coefficients, scaled by 1/(nx*ny) so the
  // zero mode is the mean. Sampling starts at x = y = -pi, so the raw DFT
  // carries a factor (-1)^(k1+k2) relative to the Fourier coefficients on
  // the centered domain; it is folded into the scaling (index parity equals
  // wavenumber parity on even grids). The redundant half is filled by
  // conjugation, which preserves the sign pattern.
  void forward(const double* f, std::complex<double>* out) const {
    const int nx = grid_.nx, ny = grid_.ny;
    const int nyh = ny / 2;
    std::memcpy(rbuf_, f, sizeof(double) * static_cast<size_t>(nx) * ny);
    fftw_execute(r2c_);
    const double scale = 1.0 / (static_cast<double>(nx) * ny);
    for (int i = 0; i < nx; ++i) {
      const fftw_complex* row = cbuf_ + static_cast<size_t>(i) * (nyh + 1);
      for (int j = 0; j <= nyh; ++j) {
        const double s = ((i + j) & 1) != 0 ? -scale : scale;
        out[i * ny + j] =
            std::complex<double>(row[j][0] * s, row[j][1] * s);
      }
    }
    for (int i = 0; i < nx; ++i) {
      const int mi = i == 0 ? 0 : nx - i;
      for (int j = nyh + 1; j < ny; ++j) {
        out[i * ny + j] = std::conj(out[mi * ny + (ny - j)]);
      }
    }
  }

  // Full-spectrum coefficients -> real field. Only the non-redundant half
  // j <= ny/2 is read; with the forward scaling above, c2r reproduces the
  // field without further normalization.
  void inverse(const std::complex<double>* in, double* out) const {
    const int nx = grid_.nx, ny = grid_.ny;
    const int nyh = ny / 2;
    for (int i = 0; i < nx; ++i) {
      fftw_complex* row = cbuf_ + static_cast<size_t>(i) * (nyh + 1);
      for (int j = 0; j <= nyh; ++j) {
        const std::complex<double> c = in[i * ny + j];
        const double s = ((i + j) & 1) != 0 ? -1.0 : 1.0;
        row[j][0] = s * c.real();
        row[j][1] = s * c.imag();
      }
    }
    fftw_execute(c2r_);
    std::memcpy(out, rbuf_, sizeof(double) * static_cast<size_t>(nx) * ny);
  }

 private:
  GridSpec grid_;
  int np_ = 0;
  double* rbuf_ = nullptr;
  fftw_complex* cbuf_ = nullptr;
  fftw_plan r2c_ = nullptr;
  fftw_plan c2r_ = nullptr;
};

const Workspace& workspace_for(GridSpec grid) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<Workspace>> cache;
  auto& slot = cache[{grid.nx, grid.ny}];
  if (!slot) slot = std::make_unique<Workspace>(grid);
  return *slot;
}

void require_grid(const GridSpec& grid, const char* who) {
  if (grid.nx < 4 || grid.ny < 4) {
    throw std::invalid_argument(std::string(who) + ": field has no grid");
  }
}

}  // namespace

namespace detail {

SpectralField forward_unchecked(const RealField& f) {
  require_grid(f.grid(), "forward_transform");
  SpectralField out(f.grid());
  workspace_for(f.grid()).forward(f.data(), out.data());
  return out;
}

RealField inverse_unchecked(const SpectralField& coeffs) {
  require_grid(coeffs.grid(), "inverse_transform");
  RealField out(coeffs.grid());
  workspace_for(coeffs.grid()).inverse(coeffs.data(), out.data());
  return out;
}

}  // namespace detail

SpectralField forward_transform(const RealField& f) {
  require_grid(f.grid(), "forward_transform");
  if (!f.all_finite()) {
    throw std::invalid_argument("forward_transform: input has non-finite values");
  }
  return detail::forward_unchecked(f);
}

RealField inverse_transform(const SpectralField& coeffs) {
  const GridSpec& g = coeffs.grid();
  require_grid(g, "inverse_transform");
  // A real preimage requires coeff(-k) = conj(coeff(k)); anything else would
  // be silently dropped by the half-spectrum transform, so reject it.
  double max_violation = 0.0;
  double max_abs = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    const int mi = i == 0 ? 0 : g.nx - i;
    for (int j = 0; j < g.ny; ++j) {
      const int mj = j == 0 ? 0 : g.ny - j;
      const std::complex<double> c = coeffs.at(i, j);
      const std::complex<double> m = coeffs.at(mi, mj);
      max_abs = std::max(max_abs, std::abs(c));
      max_violation = std::max(max_violation, std::abs(c - std::conj(m)));
    }
  }
  if (!(max_violation <= 1e-10 * std::max(1.0, max_abs))) {
    throw std::invalid_argument(
        "inverse_transform: coefficients violate Hermitian symmetry");
  }
  return detail::inverse_unchecked(coeffs);
}

std::pair<RealField, RealField> spectral_gradient(const RealField& h) {
  const GridSpec g = h.grid();
  SpectralField f = forward_transform(h);
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
  return {detail::inverse_unchecked(gx), detail::inverse_unchecked(gy)};
}

RealField spectral_divergence(const RealField& vx, const RealField& vy) {
  if (!(vx.grid() == vy.grid())) {
    throw std::invalid_argument("spectral_divergence: component grids differ");
  }
  const GridSpec g = vx.grid();
  SpectralField fx = forward_transform(vx);
  SpectralField fy = forward_transform(vy);
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
  return detail::inverse_unchecked(d);
}

RealField spectral_laplacian(const RealField& h) {
  const GridSpec g = h.grid();
  SpectralField f = forward_transform(h);
  const WaveNumbers wn(g);
  for (int m = 0; m < g.size(); ++m) {
    f.data()[m] *= -wn.ksq[m];
  }
  return detail::inverse_unchecked(f);
}

RealField spectral_bilaplacian(const RealField& h) {
  const GridSpec g = h.grid();
  SpectralField f = forward_transform(h);
  const WaveNumbers wn(g);
  for (int m = 0; m < g.size(); ++m) {
    f.data()[m] *= wn.kquad[m];
  }
  return detail::inverse_unchecked(f);
}

RealField solve_shifted_biharmonic(const RealField& rhs, double a, double b) {
  if (!(a > 0.0)) {
    throw std::invalid_argument("solve_shifted_biharmonic: a must be positive");
  }
  if (!(b >= 0.0)) {
    throw std::invalid_argument(
        "solve_shifted_biharmonic: b must be nonnegative");
  }
  const GridSpec g = rhs.grid();
  SpectralField f = forward_transform(rhs);
  const WaveNumbers wn(g);
  // kquad vanishes at k = 0, so the zero mode is divided by a alone and
  // mean(u) = mean(rhs)/a holds exactly.
  for (int m = 0; m < g.size(); ++m) {
    f.data()[m] /= a + b * wn.kquad[m];
  }
  return detail::inverse_unchecked(f);
}

double integrate(const RealField& f) {
  require_grid(f.grid(), "integrate");
  KahanSum s;
  for (double v : f.values()) s.add(v);
  return s.sum * (f.grid().dx() * f.grid().dy());
}

double norm_l2(const RealField& f) {
  require_grid(f.grid(), "norm_l2");
  KahanSum s;
  for (double v : f.values()) s.add(v * v);
  return std::sqrt(s.sum * (f.grid().dx() * f.grid().dy()));
}

double seminorm_h2(const RealField& f) { return norm_l2(spectral_laplacian(f)); }

double mean(const RealField& f) { return integrate(f) / kDomainArea; }

void dealias_truncate(SpectralField& coeffs) {
  const GridSpec& g = coeffs.grid();
  require_grid(g, "dealias_truncate");
  const int cut_x = g.nx / 3;
  const int cut_y = g.ny / 3;
  for (int i = 0; i < g.nx; ++i) {
    const int k1 = fft_wavenumber(i, g.nx);
    for (int j = 0; j < g.ny; ++j) {
      const int k2 = fft_wavenumber(j, g.ny);
      if (std::abs(k1) > cut_x || std::abs(k2) > cut_y) {
        coeffs.at(i, j) = 0.0;
      }
    }
  }
}

}  // namespace sincmbe
