#include "sincmbe/models.hpp"

#include <cmath>
#include <stdexcept>

#include "internal.hpp"
#include "sincmbe/spectral.hpp"

namespace sincmbe {

double sinc_eval(double s) {
  const double a = std::abs(s);
  if (a < 1e-4) {
    const double s2 = s * s;
    return 1.0 - s2 / 6.0 + (s2 * s2) / 120.0;
  }
  return std::sin(s) / s;
}

Vec2 flux_at(const ModelParams& params, Vec2 z) {
  switch (params.kind) {
    case ModelKind::kSincIsotropic: {
      const double s = params.beta * std::sqrt(z.x * z.x + z.y * z.y);
      const double c = -params.beta * params.beta * params.beta1 * sinc_eval(s);
      return {c * z.x, c * z.y};
    }
    case ModelKind::kClassicalSlopeSelection: {
      const double c = z.x * z.x + z.y * z.y - 1.0;
      return {c * z.x, c * z.y};
    }
    case ModelKind::kSquareSymmetry:
      return {-std::sin(z.x), -std::sin(z.y)};
    case ModelKind::kLinearOnly:
      return {0.0, 0.0};
  }
  throw std::logic_error("flux_at: unknown model kind");
}

VectorField flux(const ModelParams& params, const VectorField& grad) {
  if (!(grad.x.grid() == grad.y.grid())) {
    throw std::invalid_argument("flux: component grids differ");
  }
  VectorField out{RealField(grad.x.grid()), RealField(grad.y.grid())};
  const int n = grad.x.size();
  for (int m = 0; m < n; ++m) {
    const Vec2 g =
        flux_at(params, {grad.x.values()[m], grad.y.values()[m]});
    out.x.values()[m] = g.x;
    out.y.values()[m] = g.y;
  }
  return out;
}

double well_density(const ModelParams& params, double hx, double hy) {
  switch (params.kind) {
    case ModelKind::kSincIsotropic:
      return params.beta1 *
             std::cos(params.beta * std::sqrt(hx * hx + hy * hy));
    case ModelKind::kClassicalSlopeSelection: {
      const double s = hx * hx + hy * hy;
      if (params.classical_well == ClassicalWell::kScaledSix) {
        return (s - 6.0) * (s - 6.0) / 24.0;
      }
      return 0.25 * (s - 1.0) * (s - 1.0);
    }
    case ModelKind::kSquareSymmetry:
      return std::cos(hx) + std::cos(hy);
    case ModelKind::kLinearOnly:
      return 0.0;
  }
  throw std::logic_error("well_density: unknown model kind");
}

namespace {

using detail::KahanSum;

double well_integral(const ModelParams& params, const RealField& hx,
                     const RealField& hy) {
  if (params.kind == ModelKind::kLinearOnly) return 0.0;
  KahanSum s;
  const int n = hx.size();
  for (int m = 0; m < n; ++m) {
    s.add(well_density(params, hx.values()[m], hy.values()[m]));
  }
  return s.sum * (hx.grid().dx() * hx.grid().dy());
}

}  // namespace

double total_energy(const ModelParams& params, const RealField& h) {
  auto [hx, hy] = spectral_gradient(h);
  const RealField lap = spectral_laplacian(h);
  KahanSum s;
  for (double v : lap.values()) s.add(v * v);
  const double lap_sq = s.sum * (h.grid().dx() * h.grid().dy());
  return 0.5 * params.eta_sq * lap_sq + well_integral(params, hx, hy);
}

double modified_energy_bdf2(const ModelParams& params, const RealField& h_curr,
                            const RealField& h_prev, double tau) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("modified_energy_bdf2: tau must be positive");
  }
  if (!(h_curr.grid() == h_prev.grid())) {
    throw std::invalid_argument("modified_energy_bdf2: grids differ");
  }
  RealField diff(h_curr.grid());
  const int n = h_curr.size();
  for (int m = 0; m < n; ++m) {
    diff.values()[m] = h_curr.values()[m] - h_prev.values()[m];
  }
  const double diff_l2 = norm_l2(diff);
  auto [dx, dy] = spectral_gradient(diff);
  KahanSum s;
  for (int m = 0; m < n; ++m) {
    s.add(dx.values()[m] * dx.values()[m] + dy.values()[m] * dy.values()[m]);
  }
  const double grad_sq = s.sum * (diff.grid().dx() * diff.grid().dy());
  return total_energy(params, h_curr) + diff_l2 * diff_l2 / (4.0 * tau) +
         0.5 * grad_sq;
}

double hessian_quadratic_form(Vec2 z, Vec2 x) {
  const double s = std::sqrt(z.x * z.x + z.y * z.y);
  const double xsq = x.x * x.x + x.y * x.y;
  if (s == 0.0) return -xsq;
  // Split x along zhat and its orthogonal complement:
  //   x^T Hess W(z) x = -cos(s) (x.zhat)^2 - sinc(s) |x_perp|^2.
  const double along = (x.x * z.x + x.y * z.y) / s;
  const double perp_sq = std::max(xsq - along * along, 0.0);
  return -std::cos(s) * along * along - sinc_eval(s) * perp_sq;
}

std::pair<double, double> flux_jacobian_eigenvalues(double s) {
  if (!(s >= 0.0)) {
    throw std::invalid_argument(
        "flux_jacobian_eigenvalues: s must be nonnegative");
  }
  return {-std::cos(s), -sinc_eval(s)};
}

double sinc_series_partial(double s, int n_terms) {
  if (n_terms < 0) {
    throw std::invalid_argument("sinc_series_partial: n_terms must be >= 0");
  }
  // 1 - sum_i B_i s^(2i), B_i = (-1)^(i-1)/(2i+1)!. Terms are built
  // iteratively: term_i = term_{i-1} * (-s^2) / ((2i)(2i+1)) gives the
  // signed series contribution directly.
  double value = 1.0;
  double term = 1.0;
  const double s2 = s * s;
  for (int i = 1; i <= n_terms; ++i) {
    term *= -s2 / ((2.0 * i) * (2.0 * i + 1.0));
    value += term;
  }
  return value;
}

}  // namespace sincmbe
