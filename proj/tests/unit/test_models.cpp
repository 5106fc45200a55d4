#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sincmbe/models.hpp"
#include "sincmbe/spectral.hpp"

using namespace sincmbe;
using testutil::fill;

namespace {

ModelParams sinc_params(double eta_sq = 0.01) {
  ModelParams p;
  p.kind = ModelKind::kSincIsotropic;
  p.eta_sq = eta_sq;
  return p;
}

ModelParams make_params(ModelKind kind, double eta_sq = 0.01) {
  ModelParams p;
  p.kind = kind;
  p.eta_sq = eta_sq;
  return p;
}

}  // namespace

TEST_CASE("model params validation") {
  ModelParams p = sinc_params();
  CHECK_NOTHROW(p.validate());
  p.eta_sq = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.eta_sq = 0.01;
  p.beta = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  // beta1 = 0 is the degenerate linear case and stays legal.
  p.beta = 1.0;
  p.beta1 = 0.0;
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("sinc evaluation at the reference points") {
  CHECK(sinc_eval(0.0) == 1.0);
  CHECK(std::abs(sinc_eval(kPi)) < 1e-15);
  CHECK(sinc_eval(kPi / 2) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
  CHECK(sinc_eval(2.0) == doctest::Approx(std::sin(2.0) / 2.0).epsilon(1e-15));
  CHECK(sinc_eval(-1.3) == sinc_eval(1.3));
}

TEST_CASE("sinc evaluation is smooth across the series switch") {
  // Direct formula and Taylor branch must agree near |s| = 1e-4.
  for (double s : {9.0e-5, 9.9e-5, 1.0e-4, 1.01e-4, 2.0e-4}) {
    const double direct = std::sin(s) / s;
    CHECK(sinc_eval(s) == doctest::Approx(direct).epsilon(1e-14));
  }
  CHECK(sinc_eval(1e-9) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pointwise flux reference values") {
  auto p = sinc_params();

  SUBCASE("sinc model") {
    Vec2 g0 = flux_at(p, {0.0, 0.0});
    CHECK(g0.x == 0.0);
    CHECK(g0.y == 0.0);
    Vec2 gpi = flux_at(p, {kPi, 0.0});
    CHECK(std::abs(gpi.x) < 1e-15);
    CHECK(std::abs(gpi.y) < 1e-15);
    Vec2 gh = flux_at(p, {kPi / 2, 0.0});
    CHECK(gh.x == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(gh.y == 0.0);
  }

  SUBCASE("sinc model respects beta scaling") {
    p.beta = 2.0;
    p.beta1 = 0.5;
    const double s = 0.7;
    Vec2 g = flux_at(p, {s, 0.0});
    CHECK(g.x == doctest::Approx(-4.0 * 0.5 * sinc_eval(2.0 * s) * s).epsilon(1e-14));
  }

  SUBCASE("classical slope selection") {
    auto c = make_params(ModelKind::kClassicalSlopeSelection);
    Vec2 g1 = flux_at(c, {1.0, 0.0});
    CHECK(std::abs(g1.x) < 1e-15);
    Vec2 g2 = flux_at(c, {2.0, 0.0});
    CHECK(g2.x == doctest::Approx(6.0).epsilon(1e-14));
    Vec2 g3 = flux_at(c, {0.6, -0.8});
    CHECK(g3.x == doctest::Approx(0.0).epsilon(1e-14));  // |z| = 1
    CHECK(g3.y == doctest::Approx(0.0).epsilon(1e-14));
  }

  SUBCASE("square symmetry is componentwise") {
    auto q = make_params(ModelKind::kSquareSymmetry);
    Vec2 g = flux_at(q, {kPi / 2, kPi});
    CHECK(g.x == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(g.y) < 1e-15);
  }

  SUBCASE("linear model has zero flux") {
    auto l = make_params(ModelKind::kLinearOnly);
    Vec2 g = flux_at(l, {3.0, -4.0});
    CHECK(g.x == 0.0);
    CHECK(g.y == 0.0);
  }
}

TEST_CASE("sinc flux is globally bounded by one") {
  auto p = sinc_params();
  std::mt19937_64 gen(2718);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  for (int n = 0; n < 100000; ++n) {
    Vec2 z{d(gen), d(gen)};
    Vec2 g = flux_at(p, z);
    CHECK(std::hypot(g.x, g.y) <= 1.0 + 1e-12);
  }
}

TEST_CASE("field flux applies the pointwise map") {
  GridSpec grid(16, 16);
  auto p = make_params(ModelKind::kSquareSymmetry);
  VectorField v{fill(grid, [](double x, double) { return x; }),
                fill(grid, [](double, double y) { return 2 * y; })};
  VectorField g = flux(p, v);
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      CHECK(g.x(i, j) == doctest::Approx(-std::sin(grid.x(i))).epsilon(1e-15));
      CHECK(g.y(i, j) == doctest::Approx(-std::sin(2 * grid.y(j))).epsilon(1e-15));
    }
  }
}

TEST_CASE("vacuum energies match closed forms") {
  GridSpec grid(32, 32);
  RealField zero(grid);
  CHECK(total_energy(sinc_params(0.25), zero) == doctest::Approx(4 * kPi * kPi).epsilon(1e-14));
  CHECK(total_energy(make_params(ModelKind::kClassicalSlopeSelection), zero) ==
        doctest::Approx(kPi * kPi).epsilon(1e-14));
  auto scaled = make_params(ModelKind::kClassicalSlopeSelection);
  scaled.classical_well = ClassicalWell::kScaledSix;
  CHECK(total_energy(scaled, zero) == doctest::Approx(6 * kPi * kPi).epsilon(1e-14));
  CHECK(total_energy(make_params(ModelKind::kSquareSymmetry), zero) ==
        doctest::Approx(8 * kPi * kPi).epsilon(1e-14));
  CHECK(total_energy(make_params(ModelKind::kLinearOnly), zero) == 0.0);
}

TEST_CASE("sinc energy of sin(x) hits the Bessel closed form") {
  GridSpec grid(64, 64);
  auto h = fill(grid, [](double x, double) { return std::sin(x); });
  const double expected = 0.01 * kPi * kPi + 4 * kPi * kPi * std::cyl_bessel_j(0, 1.0);
  CHECK(total_energy(sinc_params(0.01), h) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("classical scaled-six well changes only the density") {
  GridSpec grid(32, 32);
  auto h = testutil::random_smooth(grid, 3, 41, 0.1);
  auto unit = make_params(ModelKind::kClassicalSlopeSelection);
  auto six = unit;
  six.classical_well = ClassicalWell::kScaledSix;
  // Same flux, different reported density.
  Vec2 f1 = flux_at(unit, {0.3, 0.4});
  Vec2 f2 = flux_at(six, {0.3, 0.4});
  CHECK(f1.x == f2.x);
  CHECK(f1.y == f2.y);
  CHECK(total_energy(unit, h) != total_energy(six, h));
}

TEST_CASE("modified energy reduces to the plain energy for equal states") {
  GridSpec grid(32, 32);
  auto p = sinc_params();
  auto h = testutil::random_smooth(grid, 4, 17, 0.2);
  CHECK(modified_energy_bdf2(p, h, h, 0.05) == doctest::Approx(total_energy(p, h)).epsilon(1e-14));
}

TEST_CASE("modified energy of a constant shift adds c^2 area / (4 tau)") {
  GridSpec grid(32, 32);
  auto p = sinc_params();
  auto h = testutil::random_smooth(grid, 4, 18, 0.2);
  RealField shifted = h;
  const double c = 0.3, tau = 0.05;
  for (int n = 0; n < shifted.size(); ++n) shifted.data()[n] += c;
  const double expect = total_energy(p, shifted) + c * c * kDomainArea / (4 * tau);
  CHECK(modified_energy_bdf2(p, shifted, h, tau) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("modified energy recomposes from spectral-core norms") {
  GridSpec grid(32, 32);
  auto p = sinc_params();
  auto a = testutil::random_smooth(grid, 5, 23, 0.15);
  auto b = testutil::random_smooth(grid, 5, 24, 0.15);
  const double tau = 0.02;
  RealField diff(grid);
  for (int n = 0; n < a.size(); ++n) diff.data()[n] = a.data()[n] - b.data()[n];
  auto [dx, dy] = spectral_gradient(diff);
  RealField grad_sq(grid);
  for (int n = 0; n < diff.size(); ++n) {
    grad_sq.data()[n] = dx.data()[n] * dx.data()[n] + dy.data()[n] * dy.data()[n];
  }
  const double l2 = norm_l2(diff);
  const double expect = total_energy(p, a) + l2 * l2 / (4 * tau) + 0.5 * integrate(grad_sq);
  CHECK(modified_energy_bdf2(p, a, b, tau) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("modified energy rejects non-positive tau and grid mismatch") {
  GridSpec grid(16, 16);
  RealField h(grid);
  CHECK_THROWS_AS(modified_energy_bdf2(sinc_params(), h, h, 0.0), std::invalid_argument);
  RealField other((GridSpec(32, 32)));
  CHECK_THROWS_AS(modified_energy_bdf2(sinc_params(), h, other, 0.1), std::invalid_argument);
}

TEST_CASE("hessian quadratic form reference values") {
  CHECK(hessian_quadratic_form({0.0, 0.0}, {1.0, 0.0}) == doctest::Approx(-1.0));
  CHECK(hessian_quadratic_form({kPi, 0.0}, {1.0, 0.0}) == doctest::Approx(1.0));
  CHECK(hessian_quadratic_form({kPi / 2, 0.0}, {0.0, 1.0}) ==
        doctest::Approx(-2.0 / kPi).epsilon(1e-14));
  // Scales quadratically in x.
  CHECK(hessian_quadratic_form({0.7, 0.2}, {2.0, 2.0}) ==
        doctest::Approx(4.0 * hessian_quadratic_form({0.7, 0.2}, {1.0, 1.0})).epsilon(1e-13));
}

TEST_CASE("hessian quadratic form never exceeds |x|^2") {
  std::mt19937_64 gen(5150);
  std::uniform_real_distribution<double> d(-50.0, 50.0);
  for (int n = 0; n < 20000; ++n) {
    Vec2 z{d(gen), d(gen)};
    Vec2 x{d(gen), d(gen)};
    const double xsq = x.x * x.x + x.y * x.y;
    CHECK(hessian_quadratic_form(z, x) <= xsq * (1.0 + 1e-12));
    CHECK(hessian_quadratic_form(z, x) >= -xsq * (1.0 + 1e-12));
  }
}

TEST_CASE("flux jacobian eigenvalues") {
  auto [l1a, l2a] = flux_jacobian_eigenvalues(0.0);
  CHECK(l1a == doctest::Approx(-1.0));
  CHECK(l2a == doctest::Approx(-1.0));
  auto [l1b, l2b] = flux_jacobian_eigenvalues(kPi);
  CHECK(l1b == doctest::Approx(1.0));
  CHECK(std::abs(l2b) < 1e-15);
  auto [l1c, l2c] = flux_jacobian_eigenvalues(kPi / 2);
  CHECK(std::abs(l1c) < 1e-15);
  CHECK(l2c == doctest::Approx(-2.0 / kPi).epsilon(1e-14));
  CHECK_THROWS_AS(flux_jacobian_eigenvalues(-1.0), std::invalid_argument);

  std::mt19937_64 gen(33);
  std::uniform_real_distribution<double> d(0.0, 1e3);
  for (int n = 0; n < 10000; ++n) {
    auto [l1, l2] = flux_jacobian_eigenvalues(d(gen));
    CHECK(std::abs(l1) <= 1.0);
    CHECK(std::abs(l2) <= 1.0 + 1e-15);
  }
}

TEST_CASE("sinc series partial sums") {
  CHECK(sinc_series_partial(17.5, 0) == 1.0);
  CHECK(sinc_series_partial(1.0, 1) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(sinc_series_partial(2.0, 15) == doctest::Approx(sinc_eval(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(sinc_series_partial(1.0, -1), std::invalid_argument);
}

TEST_CASE("series partial sums converge to sinc on |s| <= 3") {
  for (double s = -3.0; s <= 3.0; s += 0.125) {
    CHECK(std::abs(sinc_series_partial(s, 20) - sinc_eval(s)) <= 1e-10);
  }
}

TEST_CASE("slope-selection limit of the sinc flux") {
  // With beta = sqrt(6), beta1 = 1/6 the flux expands as
  // -(1 - |z|^2) z + 0.3 |z|^4 z + O(|z|^7).
  ModelParams p;
  p.kind = ModelKind::kSincIsotropic;
  p.eta_sq = 1.0;
  p.beta = std::sqrt(6.0);
  p.beta1 = 1.0 / 6.0;
  for (double s : {5e-2, 2e-2, 1e-2}) {
    Vec2 g = flux_at(p, {s, 0.0});
    const double err = std::abs(g.x + (1.0 - s * s) * s);
    CHECK(err / std::pow(s, 5) == doctest::Approx(0.3).epsilon(2e-3));
  }
}

TEST_CASE("energy Gateaux derivative matches the variational formula") {
  GridSpec grid(32, 32);
  auto h = testutil::random_smooth(grid, 4, 101, 0.1);
  auto phi = testutil::random_smooth(grid, 4, 102, 0.1);
  const double eps = 1e-4;

  for (ModelKind kind : {ModelKind::kSincIsotropic, ModelKind::kClassicalSlopeSelection,
                         ModelKind::kSquareSymmetry}) {
    auto p = make_params(kind, 0.1);
    RealField plus(grid), minus(grid);
    for (int n = 0; n < h.size(); ++n) {
      plus.data()[n] = h.data()[n] + eps * phi.data()[n];
      minus.data()[n] = h.data()[n] - eps * phi.data()[n];
    }
    const double fd = (total_energy(p, plus) - total_energy(p, minus)) / (2 * eps);

    auto [hx, hy] = spectral_gradient(h);
    VectorField g = flux(p, VectorField{hx, hy});
    auto divg = spectral_divergence(g.x, g.y);
    auto bih = spectral_bilaplacian(h);
    RealField integrand(grid);
    for (int n = 0; n < h.size(); ++n) {
      integrand.data()[n] = (p.eta_sq * bih.data()[n] - divg.data()[n]) * phi.data()[n];
    }
    const double exact = integrate(integrand);
    CHECK(fd == doctest::Approx(exact).epsilon(1e-4));
  }
}
