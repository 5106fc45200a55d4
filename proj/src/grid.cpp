#include "sincmbe/grid.hpp"

#include <cmath>

namespace sincmbe {

bool RealField::all_finite() const {
  for (double v : v_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double RealField::max_abs() const {
  double m = 0.0;
  for (double v : v_) m = std::max(m, std::abs(v));
  return m;
}

WaveNumbers::WaveNumbers(GridSpec grid_) : grid(grid_) {
  ksq.resize(grid.size());
  kquad.resize(grid.size());
  for (int i = 0; i < grid.nx; ++i) {
    const double k1 = fft_wavenumber(i, grid.nx);
    for (int j = 0; j < grid.ny; ++j) {
      const double k2 = fft_wavenumber(j, grid.ny);
      const double s = k1 * k1 + k2 * k2;
      ksq[i * grid.ny + j] = s;
      kquad[i * grid.ny + j] = s * s;
    }
  }
}

}  // namespace sincmbe
