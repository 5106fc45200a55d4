#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace sincmbe {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
// Area of the torus [-pi,pi]^2.
inline constexpr double kDomainArea = kTwoPi * kTwoPi;

// Uniform discretization of the periodic torus [-pi,pi]^2 with nx x ny modes.
// Both counts must be even and at least 4 so the Nyquist mode is well-defined.
struct GridSpec {
  int nx = 0;
  int ny = 0;

  GridSpec() = default;
  GridSpec(int nx_, int ny_) : nx(nx_), ny(ny_) {
    if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0) {
      throw std::invalid_argument(
          "GridSpec: nx and ny must be even and >= 4");
    }
  }

  int size() const { return nx * ny; }
  double dx() const { return kTwoPi / nx; }
  double dy() const { return kTwoPi / ny; }
  double x(int i) const { return -kPi + i * dx(); }
  double y(int j) const { return -kPi + j * dy(); }

  bool operator==(const GridSpec&) const = default;
};

// Signed wavenumber of storage index idx on an n-point grid (FFT order).
// idx = n/2 maps to the Nyquist mode -n/2, so k lies in [-n/2, n/2).
inline int fft_wavenumber(int idx, int n) {
  return idx < n / 2 ? idx : idx - n;
}

// Storage index of signed wavenumber k in [-n/2, n/2).
inline int fft_index(int k, int n) { return k >= 0 ? k : k + n; }

// Scalar field sampled at the grid points, stored row-major: entry (i,j)
// lives at i*ny + j and corresponds to the point (x(i), y(j)).
class RealField {
 public:
  RealField() = default;
  explicit RealField(GridSpec grid) : grid_(grid), v_(grid.size(), 0.0) {}

  const GridSpec& grid() const { return grid_; }
  int size() const { return static_cast<int>(v_.size()); }

  double& operator()(int i, int j) { return v_[i * grid_.ny + j]; }
  double operator()(int i, int j) const { return v_[i * grid_.ny + j]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  bool all_finite() const;
  double max_abs() const;

 private:
  GridSpec grid_;
  std::vector<double> v_;
};

// Fourier coefficients of a field, full nx x ny layout in FFT storage order:
// entry (i,j) is the coefficient of mode (fft_wavenumber(i,nx),
// fft_wavenumber(j,ny)). Normalization: coeff(0,0) equals the field mean.
// Fields that came from real data satisfy coeff(-k) = conj(coeff(k)).
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(GridSpec grid) : grid_(grid), c_(grid.size()) {}

  const GridSpec& grid() const { return grid_; }
  int size() const { return static_cast<int>(c_.size()); }

  std::complex<double>& at(int i, int j) { return c_[i * grid_.ny + j]; }
  std::complex<double> at(int i, int j) const { return c_[i * grid_.ny + j]; }

  // Access by signed wavenumber, k1 in [-nx/2, nx/2), k2 in [-ny/2, ny/2).
  std::complex<double>& coeff(int k1, int k2) {
    return c_[fft_index(k1, grid_.nx) * grid_.ny + fft_index(k2, grid_.ny)];
  }
  std::complex<double> coeff(int k1, int k2) const {
    return c_[fft_index(k1, grid_.nx) * grid_.ny + fft_index(k2, grid_.ny)];
  }

  std::complex<double>* data() { return c_.data(); }
  const std::complex<double>* data() const { return c_.data(); }

 private:
  GridSpec grid_;
  std::vector<std::complex<double>> c_;
};

// Tabulated symbols of -Laplacian and biharmonic operators in FFT order:
// ksq[m] = |k|^2 and kquad[m] = |k|^4 for the mode stored at index m.
struct WaveNumbers {
  explicit WaveNumbers(GridSpec grid);

  GridSpec grid;
  std::vector<double> ksq;
  std::vector<double> kquad;
};

}  // namespace sincmbe
