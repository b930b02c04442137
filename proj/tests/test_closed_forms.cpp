#include <doctest.h>

#include <cmath>

#include "sobtrace/chart_geometry.hpp"
#include "sobtrace/closed_forms.hpp"
#include "sobtrace/diffops.hpp"
#include "sobtrace/sampling.hpp"

using namespace sobtrace;

namespace {
Vec z_along(int n, double r, int axis = 0) {
  Vec z(n + 1, 0.0);
  z[axis] = r;
  return z;
}
}  // namespace

TEST_CASE("extensions restrict to the boundary data") {
  for (int n : {3, 4, 5, 6}) {
    for (double r : {0.0, 0.1, 0.3, 0.6}) {
      const Vec z = z_along(n, r);
      const ScalarField f = boundary_extremal(4, n, z);
      const ScalarField v = biharmonic_extension(n, omega_from_z(z));
      for (const Vec& xi : sphere_points(n, 30, 3)) CHECK(std::abs(v(xi) - f(xi)) < 1e-12 * std::max(1.0, std::abs(f(xi))));
    }
  }
  for (int n : {1, 2, 3, 5}) {
    const Vec z = z_along(n, 0.4);
    const ScalarField f = boundary_extremal(2, n, z);
    const ScalarField v = harmonic_extension(n, omega_from_z(z));
    for (const Vec& xi : sphere_points(n, 30, 4)) CHECK(std::abs(v(xi) - f(xi)) < 1e-12 * std::max(1.0, std::abs(f(xi))));
  }
}

TEST_CASE("harmonic extensions are harmonic") {
  for (int n : {1, 2, 5}) {
    const ScalarField v = harmonic_extension(n, omega_from_z(z_along(n, 0.3)));
    for (const Vec& X : ball_points(n, 10, 0.9)) CHECK(std::abs(laplacian(v, X)) < 1e-7);
  }
}

TEST_CASE("the centred extension is 1 + (n-3)(1-|xi|^2)/4, not monotone for n > 3") {
  for (int n : {4, 5}) {
    const ScalarField v = biharmonic_extension(n, omega_from_z(z_along(n, 0.0)));
    for (const Vec& X : ball_points(n, 10, 1.0)) CHECK(v(X) == doctest::Approx(1.0 + (n - 3) * (1.0 - norm_sq(X)) / 4.0));
  }
  const ScalarField v3 = biharmonic_extension(3, omega_from_z(z_along(3, 0.0)));
  CHECK(v3(Vec{0.1, 0.2, 0.3, 0.1}) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("rotation covariance of the extremal families (property)") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 3;
    const auto R = random_rotation(n + 1, rng);
    const Vec z = scaled(rng.unit_vector(n + 1), rng.uniform(0, 0.8));
    const ScalarField v = biharmonic_extension(n, omega_from_z(z));
    const ScalarField vr = biharmonic_extension(n, omega_from_z(rotate(R, z)));
    for (const Vec& X : ball_points(n, 8, 1.0)) CHECK(std::abs(vr(rotate(R, X)) - v(X)) < 1e-12 * std::max(1.0, std::abs(v(X))));
  }
}

TEST_CASE("half-space extremal values") {
  const ScalarField u = halfspace_solution({{0, 0, 0}, 1.0, 0.0});
  CHECK(u(Vec{0, 0, 0, 0}) == doctest::Approx(std::log(2.0)));
  CHECK(u(Vec{0, 0, 0, 1}) == doctest::Approx(std::log(0.5) + 0.5));
  const ScalarField uc = halfspace_solution({{1, 0, 0}, 2.0, -1.0});
  const ScalarField ub = halfspace_solution({{1, 0, 0}, 2.0, 0.0});
  CHECK(uc(Vec{0.3, 0, 0, 0.5}) == doctest::Approx(ub(Vec{0.3, 0, 0, 0.5}) - 0.25));
}

TEST_CASE("transfer ball -> half-space -> ball is the identity") {
  Rng rng(32);
  for (TransferMode mode : {TransferMode::AdditiveLog, TransferMode::WeightPower}) {
    const int n = mode == TransferMode::AdditiveLog ? 3 : 5;
    const ScalarField v = biharmonic_extension(n, omega_from_z(z_along(n, 0.3)));
    const ScalarField back = transfer_field(transfer_field(v, mode), mode);
    CHECK(back.chart() == Chart::Ball);
    for (const Vec& X : ball_points(n, 20, 0.95)) CHECK(back(X) == doctest::Approx(v(X)).epsilon(1e-11));
  }
}

TEST_CASE("sun solution on the half-space matches the transferred ball extremal up to scale") {
  // v = biharmonic_extension(n, omega) pulled back with weight power is a multiple of a
  // Sun-type profile; at least it solves the same homogeneous Neumann condition.
  const int n = 5;
  const ScalarField u = sun_solution(Vec{0, 0, 0, 0, 0}, 1.0, 1.0, n);
  const StencilConfig cfg;
  for (const Vec& X : halfspace_points(n, 5, 1.0, 0.0, 0.0)) {
    Vec B = X;
    B[n] = 0.0;
    CHECK(std::abs(boundary_normal(u, B, NormalKind::DtU, cfg)) < 1e-8);
  }
  for (const Vec& X : halfspace_points(n, 5, 1.0, 0.3, 1.0)) CHECK(std::abs(bilaplacian(u, X, cfg)) < 1e-5);
}
