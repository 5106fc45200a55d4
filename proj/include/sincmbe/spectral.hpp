#pragma once

#include <utility>

#include "sincmbe/grid.hpp"

namespace sincmbe {

// FFT of a real field, normalized so that coeff(0,0) is the field mean.
// Rejects non-finite input.
SpectralField forward_transform(const RealField& f);

// Inverse FFT. The input must satisfy the Hermitian symmetry
// coeff(-k) = conj(coeff(k)) up to a relative tolerance of 1e-10;
// violations are rejected since they have no real-field preimage.
RealField inverse_transform(const SpectralField& coeffs);

// First derivatives (d/dx, d/dy) via multiplication by i*k.
// The Nyquist modes k1 = -nx/2 and k2 = -ny/2 are zeroed in the respective
// derivative so the result of this odd-order operator stays real.
std::pair<RealField, RealField> spectral_gradient(const RealField& h);

// Divergence d/dx vx + d/dy vy with the same Nyquist convention as the
// gradient, making divergence the exact negative adjoint of the gradient.
// The zero mode of the result vanishes identically.
RealField spectral_divergence(const RealField& vx, const RealField& vy);

// Laplacian via multiplication by -|k|^2.
RealField spectral_laplacian(const RealField& h);

// Biharmonic operator via multiplication by |k|^4.
RealField spectral_bilaplacian(const RealField& h);

// Solves (a + b*Laplacian^2) u = rhs with a > 0, b >= 0 by diagonal
// division. mean(u) = mean(rhs)/a holds exactly.
RealField solve_shifted_biharmonic(const RealField& rhs, double a, double b);

// Rectangle-rule integral over the torus, dx*dy * sum of values, accumulated
// in compensated (Kahan) arithmetic. Spectrally accurate for smooth periodic
// integrands.
double integrate(const RealField& f);

// L2 norm sqrt(integral of f^2).
double norm_l2(const RealField& f);

// H2 seminorm, the L2 norm of the spectral Laplacian.
double seminorm_h2(const RealField& f);

// Mean value, integral divided by the domain area.
double mean(const RealField& f);

// Zeroes all modes with |k1| > nx/3 or |k2| > ny/3 (two-thirds rule).
void dealias_truncate(SpectralField& coeffs);

namespace detail {

// Transform variants without finiteness or symmetry validation. Non-finite
// values propagate silently; the time steppers rely on this to signal blowup
// through the returned state instead of throwing mid-run.
SpectralField forward_unchecked(const RealField& f);
RealField inverse_unchecked(const SpectralField& coeffs);

}  // namespace detail

}  // namespace sincmbe
