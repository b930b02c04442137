#include <doctest.h>

#include <cmath>

#include "sobtrace/chart_geometry.hpp"
#include "sobtrace/closed_forms.hpp"
#include "sobtrace/diffops.hpp"
#include "sobtrace/errors.hpp"
#include "sobtrace/quadrature.hpp"
#include "sobtrace/sampling.hpp"
#include "sobtrace/spectral_oracle.hpp"

using namespace sobtrace;

TEST_CASE("Gegenbauer values") {
  CHECK(gegenbauer_eval(0, 1.0, 0.3) == 1.0);
  CHECK(gegenbauer_eval(1, 1.0, 0.3) == doctest::Approx(0.6));
  CHECK(gegenbauer_eval(2, 1.0, 0.3) == doctest::Approx(4 * 0.09 - 1));  // U_2
  CHECK(gegenbauer_eval(3, 0.0, 0.4) == doctest::Approx(std::cos(3 * std::acos(0.4))));
}

TEST_CASE("orthonormality of the normalized basis") {
  for (double lam : {0.5, 1.0, 1.5, 2.0}) {
    const Rule1D g = gauss_gegenbauer_1d(30, lam);
    for (int j = 0; j <= 10; ++j)
      for (int k = 0; k <= 10; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
          const auto p = gegenbauer_orthonormal(10, lam, g.x[i]);
          s += g.w[i] * p[j] * p[k];
        }
        CHECK(std::abs(s - (j == k ? 1.0 : 0.0)) < 1e-10);
      }
  }
}

TEST_CASE("mode solves") {
  ZonalExpansion e{{1, 0, 0, 0}, 3, {1.0, 1.0, 1.0}};
  auto m0 = solve_modes(e, 0.0);
  CHECK(m0[0].a == doctest::Approx(1.0));
  CHECK(m0[0].b == doctest::Approx(0.0));
  CHECK(m0[1].a == doctest::Approx(1.5));
  CHECK(m0[1].b == doctest::Approx(-0.5));
  auto m1 = solve_modes(e, -1.0);
  CHECK(m1[2].a == doctest::Approx(2.5));
  CHECK(m1[2].b == doctest::Approx(-1.5));
  for (const auto& m : m1) {
    CHECK(m.a + m.b == doctest::Approx(e.coeffs[m.k]));
    CHECK(m.k * m.a + (m.k + 2) * m.b == doctest::Approx(-e.coeffs[m.k]));
  }
}

TEST_CASE("projection of simple zonal data") {
  const Vec axis{1, 0, 0, 0};
  const auto one = zonal_project(constant_field(Chart::Ball, 3, 1.0), axis, 8);
  for (std::size_t k = 1; k < one.coeffs.size(); ++k) CHECK(std::abs(one.coeffs[k]) < 1e-12);
  const ScalarField lin = make_field(Chart::Ball, 3, [](std::span<const double> X) { return X[0] / norm(X); }, "x1");
  const auto l = zonal_project(lin, axis, 8);
  for (std::size_t k = 0; k < l.coeffs.size(); ++k)
    if (k != 1) CHECK(std::abs(l.coeffs[k]) < 1e-12);
  CHECK(std::abs(l.coeffs[1]) > 0.1);
  const ScalarField bad = make_field(Chart::Ball, 3, [](std::span<const double> X) { return X[1]; }, "x2");
  CHECK_THROWS_AS(zonal_project(bad, axis, 8), NonZonalError);
}

TEST_CASE("coefficients of -log|1 - <z0,xi>| decay geometrically with ratio |omega0|") {
  const Vec z{0.3, 0, 0, 0};
  const auto e = zonal_project(boundary_extremal(4, 3, z), Vec{1, 0, 0, 0}, 40);
  const double w = norm(omega_from_z(z));
  CHECK(std::abs(decay_ratio(e, 2, 12) / w - 1.0) < 0.2);
}

TEST_CASE("oracle reproduces the closed forms") {
  for (int n : {3, 5}) {
    Vec z(n + 1, 0.0);
    z[0] = 0.3;
    const auto pts = ball_points(n, 100, 1.0);
    const auto c = compare_closed_form(z, n, 40, pts);
    CHECK(c.sup_gap < 1e-8);
    CHECK(c.max_neumann_defect < 1e-8);
    CHECK_FALSE(c.truncation_warning);
    CHECK(compare_harmonic(z, n, 40, pts).sup_gap < 1e-8);
  }
  const Vec z0(4, 0.0);
  CHECK(compare_closed_form(z0, 3, 10, ball_points(3, 20, 1.0)).sup_gap < 1e-14);
}

TEST_CASE("truncation gap shrinks geometrically in kmax") {
  const Vec z{0.5, 0, 0, 0};
  const auto pts = ball_points(3, 40, 1.0);
  const double g10 = compare_closed_form(z, 3, 10, pts, 1.0).sup_gap;
  const double g20 = compare_closed_form(z, 3, 20, pts, 1.0).sup_gap;
  const double w = norm(omega_from_z(z));
  CHECK(g20 < g10 * std::pow(w, 10) * 10.0);
  CHECK(g20 < g10);
}

TEST_CASE("analytic Laplacian and radial derivative of the reconstruction") {
  const Vec z{0.2, 0, 0, 0};
  const Vec axis{1, 0, 0, 0};
  const auto modes = solve_modes(zonal_project(boundary_extremal(4, 3, z), axis, 30), 0.0);
  const ScalarField v = biharmonic_extension(3, omega_from_z(z));
  for (const Vec& xi : sphere_points(3, 10, 3)) CHECK(std::abs(reconstruct_radial_derivative(modes, axis, 3, xi)) < 1e-10);
  const Vec X{0.2, 0.1, -0.3, 0.2};
  const ScalarField r = reconstruct(modes, axis, 3, 0.5);
  CHECK(reconstruct_value(modes, axis, 3, X) == doctest::Approx(v(X)).epsilon(1e-12));
  CHECK(r(X) == doctest::Approx(v(X)).epsilon(1e-12));
  // Laplacian of the closed form by finite differences
  CHECK(reconstruct_laplacian(modes, axis, 3, X) == doctest::Approx(laplacian(v, X)).epsilon(1e-7));
}
