#include <doctest.h>

#include <cmath>

#include "sobtrace/chart_geometry.hpp"
#include "sobtrace/errors.hpp"
#include "sobtrace/sampling.hpp"

using namespace sobtrace;

TEST_CASE("boundary of the half-space lands on the unit sphere") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Vec X = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5), 0.0};
    const ChartPoint xi = mobius_to_ball(halfspace_point(X));
    CHECK(std::abs(norm(xi.coords) - 1.0) < 1e-13);
  }
}

TEST_CASE("the map is an involution") {
  Rng rng(12);
  for (int n : {1, 3, 5}) {
    for (int i = 0; i < 200; ++i) {
      Vec X(n + 1);
      for (double& x : X) x = rng.uniform(-3, 3);
      X[n] = std::abs(X[n]);
      const ChartPoint back = mobius_to_halfspace(mobius_to_ball(halfspace_point(X)));
      for (int k = 0; k <= n; ++k) CHECK(std::abs(back.coords[k] - X[k]) < 1e-11 * (1 + norm(X)));
    }
  }
}

TEST_CASE("origin and pole") {
  const ChartPoint xi = mobius_to_ball(halfspace_point({0, 0, 0, 0}));
  CHECK(xi.coords[3] == doctest::Approx(1.0));
  CHECK(conformal_factor(std::span<const double>(Vec{0, 0, 0, 0})) == doctest::Approx(2.0));
  CHECK_THROWS_AS(mobius_to_halfspace(ball_point({0, 0, 0, -1})), PolePointError);
  CHECK_THROWS_AS(halfspace_point({0, 0, 0, -0.5}), DomainError);
  CHECK_THROWS_AS(ball_point({1, 1, 0, 0}), DomainError);
}

TEST_CASE("omega and z0 are inverse to each other, including near the origin") {
  Rng rng(13);
  for (int i = 0; i < 300; ++i) {
    const double r = i < 100 ? std::pow(10.0, -rng.uniform(0, 12)) : rng.uniform(0, 0.99);
    const Vec z = scaled(rng.unit_vector(4), r);
    const Vec w = omega_from_z(z);
    const Vec z2 = z_from_omega(w);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(z2[k] - z[k]) < 1e-14 * std::max(1.0, r) + 1e-300);
    CHECK(norm(w) < 1.0);
  }
  const Vec z{1e-20, 0, 0, 0};
  CHECK(omega_from_z(z)[0] == doctest::Approx(0.5e-20));
}

TEST_CASE("F measures the distance to the pole omega/|omega|^2") {
  Rng rng(14);
  for (int i = 0; i < 100; ++i) {
    const Vec w = scaled(rng.unit_vector(4), rng.uniform(0.05, 0.9));
    const Vec xi = rng.in_ball(4, 1.0);
    const Vec pole = scaled(w, 1.0 / norm_sq(w));
    const double d = std::sqrt(dist_sq(xi, pole));
    CHECK(std::sqrt(F_squared(xi, w)) / norm(w) == doctest::Approx(d).epsilon(1e-12));
  }
}

TEST_CASE("identity residual vanishes on seeded samples (property)") {
  Rng rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec a = scaled(rng.unit_vector(3), rng.uniform(0, 5));
    const double lambda = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    Vec X = rng.in_ball(4, 10.0);
    X[3] = std::abs(X[3]);
    worst = std::max(worst, std::abs(identity_residual(a, lambda, halfspace_point(X))));
  }
  CHECK(worst < 1e-12);
}
