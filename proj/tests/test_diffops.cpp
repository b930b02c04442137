#include <doctest.h>

#include <cmath>

#include "sobtrace/closed_forms.hpp"
#include "sobtrace/diffops.hpp"
#include "sobtrace/errors.hpp"
#include "sobtrace/sampling.hpp"
#include "sobtrace/spectral_oracle.hpp"

using namespace sobtrace;

TEST_CASE("Fornberg weights for the standard central stencils") {
  const double x3[] = {-1, 0, 1};
  const auto w = fornberg_weights(x3, 2);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(-2.0));
  const double x5[] = {-2, -1, 0, 1, 2};
  const auto w4 = fornberg_weights(x5, 4);
  CHECK(w4[2] == doctest::Approx(6.0));
  CHECK(w4[0] == doctest::Approx(1.0));
}

TEST_CASE("exactness on polynomials of degree <= scheme_order + 1 (property)") {
  Rng rng(41);
  const StencilConfig cfg = polynomial_stencil();
  for (int trial = 0; trial < 20; ++trial) {
    Vec c(6);
    for (double& x : c) x = rng.normal();
    // quintic in X1, mixed quartic, plus |X|^2
    auto p = [c](std::span<const double> X) {
      const double x = X[0], y = X[1], t = X[3];
      return c[0] * std::pow(x, 5) + c[1] * x * x * y * y + c[2] * t * t * t * t + c[3] * norm_sq(X) + c[4] * x * y * t +
             c[5];
    };
    const ScalarField f = make_field(Chart::Ball, 3, p, "poly");
    const Vec X = rng.in_ball(4, 1.0);
    const double x = X[0], y = X[1], t = X[3];
    const double lap = 20 * c[0] * x * x * x + 2 * c[1] * (x * x + y * y) + 12 * c[2] * t * t + 8 * c[3];
    const double bil = 120 * c[0] * x + 8 * c[1] + 24 * c[2];
    CHECK(laplacian(f, X, cfg) == doctest::Approx(lap).epsilon(1e-9).scale(1.0));
    CHECK(bilaplacian(f, X, cfg) == doctest::Approx(bil).epsilon(1e-9).scale(1.0));
  }
  const ScalarField q = make_field(Chart::Ball, 3, [](std::span<const double> X) { return norm_sq(X); }, "|X|^2");
  CHECK(std::abs(laplacian(q, Vec{0.3, -0.2, 0.5, 0.1}) - 8.0) < 1e-9);
}

TEST_CASE("Laplacian of u1 at the origin") {
  const ScalarField u1 = make_field(Chart::HalfSpace, 3, [](std::span<const double> X) {
    return std::log(2.0 / ((1.0 + X[3]) * (1.0 + X[3]) + X[0] * X[0] + X[1] * X[1] + X[2] * X[2]));
  }, "u1");
  CHECK(std::abs(laplacian(u1, Vec{0, 0, 0, 0}) + 4.0) < 1e-7);
}

TEST_CASE("convergence order of the base stencil") {
  const ScalarField f = make_field(Chart::Ball, 3, [](std::span<const double> X) { return std::sin(X[0]) * std::exp(X[1]); }, "s");
  const Vec X{0.3, 0.2, 0.1, 0.0};
  const double exact = 0.0;  // sin x e^y is harmonic in (x, y)
  StencilConfig a;
  a.richardson_levels = 0;
  a.h = 0.1;
  StencilConfig b = a;
  b.h = 0.05;
  const double ea = std::abs(laplacian(f, X, a) - exact), eb = std::abs(laplacian(f, X, b) - exact);
  CHECK(ea / eb >= 16.0 * 0.8);
}

TEST_CASE("tangential operators on S^3") {
  const ScalarField f = make_field(Chart::Ball, 3, [](std::span<const double> X) { return X[0] / norm(X); }, "<e1,xi>");
  for (const Vec& xi : sphere_points(3, 10, 7)) CHECK(tangential_laplacian(f, xi) == doctest::Approx(-3.0 * xi[0]).epsilon(1e-7).scale(1.0));
  CHECK(tangential_gradient_sq(f, Vec{0, 1, 0, 0}) == doctest::Approx(1.0).epsilon(1e-7));
  const ScalarField c = make_field(Chart::Ball, 3, [](std::span<const double>) { return 2.0; }, "2");
  CHECK(std::abs(tangential_laplacian(c, Vec{0, 0, 1, 0})) < 1e-8);  // roundoff only
}

TEST_CASE("zonal eigenfunctions: Delta-bar C_k = -k(k+n-1) C_k") {
  for (int n : {3, 4}) {
    const double lam = 0.5 * (n - 1);
    for (int k = 1; k <= 4; ++k) {
      const ScalarField f = make_field(Chart::Ball, n, [k, lam](std::span<const double> X) {
        return gegenbauer_eval(k, lam, X[0] / norm(X));
      }, "C_k");
      for (const Vec& xi : sphere_points(n, 6, 8)) {
        const double val = f(xi);
        CHECK(std::abs(tangential_laplacian(f, xi) + k * (k + n - 1) * val) < 1e-5 * std::max(1.0, std::abs(val)));
      }
    }
  }
}

TEST_CASE("boundary normals") {
  Vec z{0.3, 0, 0, 0};
  const ScalarField v = biharmonic_extension(3, omega_from_z(z));
  for (const Vec& xi : sphere_points(3, 50, 9)) CHECK(std::abs(boundary_normal(v, xi, NormalKind::EtaV)) < 1e-6);
  const ScalarField u = halfspace_solution({{0, 0, 0}, 1.0, 0.0});
  CHECK(boundary_normal(u, Vec{0, 0, 0, 0}, NormalKind::DtDeltaU) == doctest::Approx(32.0).epsilon(1e-5 / 32));
  const ScalarField cubic = make_field(Chart::HalfSpace, 3, [](std::span<const double> X) { return 2.0 / 3.0 * std::pow(X[3], 3); }, "t3");
  CHECK(std::abs(boundary_normal(cubic, Vec{0.4, 1, 0, 0}, NormalKind::DtU)) < 1e-9);
  CHECK_THROWS_AS(boundary_normal(u, Vec{0, 0, 0, 0}, NormalKind::EtaV), DomainError);
  CHECK_THROWS_AS(boundary_normal(v, Vec{1, 0, 0, 0}, NormalKind::DtU), DomainError);
}

TEST_CASE("sphere averages") {
  const QuadRule s = sphere_rule(3, 8);
  const ScalarField q = make_field(Chart::Ball, 3, [](std::span<const double> X) { return norm_sq(X); }, "|X|^2");
  CHECK(sphere_average(q, Vec{0, 0, 0, 0}, 0.7, s) == doctest::Approx(0.49));
  const ScalarField l = make_field(Chart::Ball, 3, [](std::span<const double> X) { return X[0]; }, "x1");
  CHECK(std::abs(sphere_average(l, Vec{0.3, -1, 2, 0}, 0.5, s) - 0.3) < 1e-12);
  FieldDomain tight;
  const ScalarField inside(Chart::Ball, 3, [](std::span<const double> X) { return X[0]; }, "x1", tight);
  CHECK_THROWS_AS(sphere_average(inside, Vec{0.8, 0, 0, 0}, 0.5, s), ClearanceError);
}

TEST_CASE("invalid stencil configurations") {
  StencilConfig c;
  c.scheme_order = 3;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.richardson_levels = 4;
  CHECK_THROWS_AS(c.validate(), DomainError);
}
