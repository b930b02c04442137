#include <doctest.h>

#include <cmath>

#include "sobtrace/chart_geometry.hpp"
#include "sobtrace/closed_forms.hpp"
#include "sobtrace/errors.hpp"
#include "sobtrace/residuals.hpp"
#include "sobtrace/sampling.hpp"

using namespace sobtrace;

TEST_CASE("ball system residual of the extremals") {
  for (int n : {3, 5}) {
    Vec z(n + 1, 0.0);
    z[0] = 0.3;
    const double beta = n == 3 ? 0.0 : -0.5 * (n - 3);
    const SystemResidual r = ball_system_residual(biharmonic_extension(n, omega_from_z(z)), boundary_extremal(4, n, z), beta,
                                                  ball_points(n, 12, 0.9), sphere_points(n, 12, 1));
    CHECK(r.worst() < 1e-6);
    CHECK(r.boundary_sups.size() == 2);
  }
}

TEST_CASE("|xi|^4 is not biharmonic: Delta^2 = 192 on R^4") {
  const ScalarField v = make_field(Chart::Ball, 3, [](std::span<const double> X) { return norm_sq(X) * norm_sq(X); }, "|X|^4");
  const SystemResidual r = ball_system_residual(v, v, 0.0, ball_points(3, 5, 0.5), sphere_points(3, 5, 2), polynomial_stencil());
  CHECK(r.interior_sup == doctest::Approx(192.0).epsilon(1e-8));
}

TEST_CASE("half-space residuals do not depend on c (property)") {
  const auto interior = halfspace_points(3, 10, 2.0, 0.1, 2.0);
  std::vector<Vec> boundary;
  for (const Vec& X : halfspace_points(3, 10, 2.0, 0.0, 1.0)) boundary.push_back({X[0], X[1], X[2], 0.0});
  const SystemResidual r0 = halfspace_system_residual(halfspace_solution({{1, 0, 0}, 2.0, 0.0}), Nonlinearity::Exp3, 0.0,
                                                      interior, boundary);
  CHECK(r0.worst() < 1e-5);
  for (double c : {-1.0, -0.3, 2.0}) {
    const SystemResidual rc = halfspace_system_residual(halfspace_solution({{1, 0, 0}, 2.0, c}), Nonlinearity::Exp3, 0.0,
                                                        interior, boundary);
    CHECK(std::abs(rc.interior_sup - r0.interior_sup) < 1e-6);
    CHECK(std::abs(rc.boundary("neumann") - r0.boundary("neumann")) < 1e-7);
  }
  CHECK_THROWS_AS(halfspace_system_residual(halfspace_solution({{0, 0, 0}, 1.0, 0.0}), Nonlinearity::Power, 1.0, interior, boundary),
                  DomainError);
}

TEST_CASE("Euler-Lagrange residual on S^3") {
  const QuadRule s = sphere_rule(3, 32, 1);
  const auto pts = sphere_points(3, 10, 4);
  const StencilConfig cfg = third_order_stencil();
  CHECK(euler_lagrange_s3_residual(constant_field(Chart::Ball, 3, 0.0), pts, s, cfg) < 1e-12);
  const ScalarField v = biharmonic_extension(3, omega_from_z(Vec{0.3, 0, 0, 0}));
  const double r0 = euler_lagrange_s3_residual(v, pts, s, cfg);
  CHECK(r0 < 1e-4);
  CHECK(std::abs(euler_lagrange_s3_residual(shifted(v, 1.0), pts, s, cfg) - r0) < 1e-8);
  const ScalarField harm = harmonic_extension(3, omega_from_z(Vec{0.3, 0, 0, 0}));
  CHECK_THROWS_AS(euler_lagrange_s3_residual(harm, pts, s, cfg), PreconditionError);
}

TEST_CASE("Pizzetti gap") {
  const QuadRule s = sphere_rule(3, 8);
  const StencilConfig cfg = polynomial_stencil();
  const ScalarField q = make_field(Chart::Ball, 3, [](std::span<const double> X) { return norm_sq(X); }, "|X|^2");
  CHECK(pizzetti_gap(q, Vec{0, 0, 0, 0}, 1.0, s, cfg) < 1e-10);
  const ScalarField c = make_field(Chart::Ball, 3, [](std::span<const double> X) { return norm_sq(X) * X[0]; }, "|X|^2 x1");
  Rng rng(6);
  for (int i = 0; i < 10; ++i) CHECK(pizzetti_gap(c, rng.in_ball(4, 1.0), 0.7, s, cfg) < 1e-9);
  const ScalarField q4 = make_field(Chart::Ball, 3, [](std::span<const double> X) { return norm_sq(X) * norm_sq(X); }, "|X|^4");
  CHECK(pizzetti_gap(q4, Vec{0.1, 0.2, 0, 0}, 0.5, s, cfg) == doctest::Approx(0.0625).epsilon(1e-8));
}

TEST_CASE("quadratic fit recovers planted coefficients") {
  const auto grid = halfspace_points(3, 60, 2.0, 0.0, 2.0);
  std::vector<double> d;
  for (const Vec& X : grid) d.push_back(-0.5 * X[3] * X[3] - 0.2 * (X[0] - 0.3) * (X[0] - 0.3) + 0.7);
  const QuadraticFit q = quadratic_fit(grid, d);
  CHECK(q.c_star == doctest::Approx(-0.5));
  CHECK(q.a_coeffs[0] == doctest::Approx(-0.2));
  CHECK(q.x0[0] == doctest::Approx(0.3));
  CHECK(q.c0 == doctest::Approx(0.7));
  CHECK(q.fit_residual < 1e-12);
  const ScalarField u = halfspace_solution({{0, 0, 0}, 1.0, -0.5});
  const ScalarField u0 = halfspace_solution({{0, 0, 0}, 1.0, 0.0});
  const QuadraticFit f = quadratic_difference_fit(u, u0, grid);
  CHECK(f.c_star == doctest::Approx(-0.5).epsilon(1e-3));
  const QuadraticFit z = quadratic_difference_fit(u, u, grid);
  CHECK(std::abs(z.c0) < 1e-14);
  std::vector<Vec> flat;
  for (const Vec& X : grid) flat.push_back({X[0], X[1], X[2], 0.0});
  CHECK_THROWS_AS(quadratic_fit(flat, d), RankDeficiencyError);
}

TEST_CASE("logarithmic lower bound") {
  std::vector<Vec> rays = {{1, 0, 0, 0}, {0, 0.6, 0, 0.8}, {0, 0, 0, 1}};
  const LowerBoundCheck a = log_lower_bound_check(halfspace_solution({{0, 0, 0}, 1.0, 0.0}), 2.0, rays);
  CHECK(a.bounded);
  const LowerBoundCheck z = log_lower_bound_check(constant_field(Chart::HalfSpace, 3, 0.0), 0.0, rays);
  CHECK(z.bounded);
  CHECK(z.c_hat_long <= 0.0);
  // too small alpha: u + 1 log|X| -> -infinity, so C_hat keeps growing
  CHECK_FALSE(log_lower_bound_check(halfspace_solution({{0, 0, 0}, 1.0, 0.0}), 1.0, rays).bounded);
}
