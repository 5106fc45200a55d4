#pragma once

// Private helpers shared by the library's translation units. Not installed.

#include "sincmbe/grid.hpp"

namespace sincmbe::detail {

// Compensated accumulator; keeps rectangle-rule sums accurate to a few ulps
// even over millions of terms.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// Wavenumber used by odd-order derivative symbols: the Nyquist mode is
// zeroed so d/dx and d/dy keep real fields real.
inline double odd_wavenumber(int idx, int n) {
  return idx == n / 2 ? 0.0 : static_cast<double>(fft_wavenumber(idx, n));
}

}  // namespace sincmbe::detail
