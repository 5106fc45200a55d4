#pragma once

#include <array>
#include <utility>

#include "sincmbe/grid.hpp"

namespace sincmbe {

// Energy functionals of the form
//   E[h] = eta_sq/2 * ||Laplacian h||^2 + integral of W(grad h),
// distinguished by the slope potential W.
enum class ModelKind {
  // W(z) = beta1 * cos(beta * |z|); flux -beta^2*beta1*sinc(beta|z|) z.
  kSincIsotropic,
  // W(z) = (|z|^2 - 1)^2 / 4; flux (|z|^2 - 1) z.
  kClassicalSlopeSelection,
  // W(z) = cos(z1) + cos(z2); flux (-sin z1, -sin z2).
  kSquareSymmetry,
  // W = 0; pure biharmonic relaxation.
  kLinearOnly,
};

// Reported energy density for the classical model. Both variants share the
// gradient flow above up to the constant offset convention; kScaledSix uses
// (|z|^2 - 6)^2 / 24 instead of the unit-slope well.
enum class ClassicalWell { kUnitSlope, kScaledSix };

struct ModelParams {
  ModelKind kind = ModelKind::kSincIsotropic;
  double eta_sq = 0.0;
  double beta = 1.0;
  double beta1 = 1.0;
  ClassicalWell classical_well = ClassicalWell::kUnitSlope;

  void validate() const {
    if (!(eta_sq > 0.0)) {
      throw std::invalid_argument("ModelParams: eta_sq must be positive");
    }
    if (!(beta > 0.0)) {
      throw std::invalid_argument("ModelParams: beta must be positive");
    }
  }
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct VectorField {
  RealField x;
  RealField y;
};

// sin(s)/s continued by 1 at s = 0. Even in s; switches to the Taylor
// polynomial 1 - s^2/6 + s^4/120 for |s| < 1e-4 to avoid cancellation.
double sinc_eval(double s);

// Pointwise flux g(z) = dW/dz for the given model.
Vec2 flux_at(const ModelParams& params, Vec2 z);

// Flux field of a gradient field (grad.x, grad.y), applied pointwise.
VectorField flux(const ModelParams& params, const VectorField& grad);

// Slope contribution W(grad h) of the energy density at one point.
double well_density(const ModelParams& params, double hx, double hy);

// E[h] = eta_sq/2 * ||Laplacian h||^2 + integral of W(grad h).
double total_energy(const ModelParams& params, const RealField& h);

// Two-step energy dissipated by the BDF2 scheme:
//   E[h_curr] + ||h_curr - h_prev||^2 / (4 tau)
//            + ||grad(h_curr - h_prev)||^2 / 2.
double modified_energy_bdf2(const ModelParams& params, const RealField& h_curr,
                            const RealField& h_prev, double tau);

// Quadratic form x^T Hess W(z) x of the sinc-model well with beta = beta1 = 1,
// evaluated through the split into components along and orthogonal to z:
//   -cos(|z|) (x.zhat)^2 - sinc(|z|) (x.zhat_perp)^2,
// with the limit -|x|^2 at z = 0. Its value never exceeds |x|^2 in magnitude.
double hessian_quadratic_form(Vec2 z, Vec2 x);

// Eigenvalues {-cos(s), -sinc(s)} of the Jacobian of the sinc-model flux at
// slope magnitude s (beta = beta1 = 1). Both lie in [-1, 1].
std::pair<double, double> flux_jacobian_eigenvalues(double s);

// Partial sum 1 - sum_{i=1..n_terms} B_i s^(2i) of the sinc power series,
// B_i = (-1)^(i-1) / (2i+1)!. n_terms = 0 gives the constant term 1.
double sinc_series_partial(double s, int n_terms);

}  // namespace sincmbe
