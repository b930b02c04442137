#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sobtrace/chart_geometry.hpp"
#include "sobtrace/closed_forms.hpp"
#include "sobtrace/errors.hpp"
#include "sobtrace/functionals.hpp"

using namespace sobtrace;
constexpr double kPi = std::numbers::pi;

namespace {

Vec z_along(int n, double r) {
  Vec z(n + 1, 0.0);
  z[0] = r;
  return z;
}

DeficitRules zonal_rules(int n, int res = 32) {
  DeficitRules r{sphere_rule(n, res, 1), ball_rule(n, res, res, 1), {}, true};
  r.cfg.richardson_levels = 1;
  return r;
}

}  // namespace

TEST_CASE("inequality constants") {
  const auto c4 = constants(4);
  CHECK(c4.b_n == 2.5);
  CHECK(c4.a_n == doctest::Approx(3.75 * std::pow(8 * kPi * kPi / 3, 0.75)));
  const auto c5 = constants(5);
  CHECK(c5.b_n == 6.0);
  CHECK(c5.a_n == doctest::Approx(12 * std::pow(kPi * kPi * kPi, 0.6)));
  CHECK(constants(3).b_n == 0.0);
}

TEST_CASE("trivial data has zero deficit") {
  const ScalarField zero = constant_field(Chart::Ball, 3, 0.0);
  const DeficitReport d = deficit(4, 3, zero, zero, zonal_rules(3));
  CHECK(std::abs(d.lhs) < 1e-14);
  CHECK(std::abs(d.rhs) < 1e-14);
  CHECK(std::abs(d.deficit) < 1e-14);
}

TEST_CASE("extremals have zero deficit in every form") {
  CHECK(std::abs(deficit(4, 3, boundary_extremal(4, 3, z_along(3, 0.3)), biharmonic_extension(3, omega_from_z(z_along(3, 0.3))),
                         zonal_rules(3)).deficit) < 1e-6);
  for (int n : {4, 5}) {
    const Vec z = z_along(n, 0.2);
    const DeficitReport d = deficit(4, n, boundary_extremal(4, n, z), biharmonic_extension(n, omega_from_z(z)), zonal_rules(n));
    CHECK(std::abs(d.deficit) < 1e-5 * std::max(1.0, d.rhs));
  }
  for (int n : {1, 2, 3}) {
    const Vec z = z_along(n, 0.4);
    CHECK(std::abs(deficit(2, n, boundary_extremal(2, n, z), harmonic_extension(n, omega_from_z(z)), zonal_rules(n)).deficit) < 1e-6);
  }
}

TEST_CASE("an interior bump keeps the boundary data and raises the deficit") {
  const ScalarField zero = constant_field(Chart::Ball, 3, 0.0);
  const ScalarField bump = make_field(Chart::Ball, 3, [](std::span<const double> X) {
    const double s = 1.0 - norm_sq(X);
    return 0.1 * s * s;
  }, "bump");
  CHECK(deficit(4, 3, zero, bump, zonal_rules(3)).deficit > 0.0);
}

TEST_CASE("constant shift invariance for n = 3 and homogeneity for n = 4 (property)") {
  const Vec z3 = z_along(3, 0.3);
  const ScalarField f = boundary_extremal(4, 3, z3);
  const ScalarField v = biharmonic_extension(3, omega_from_z(z3));
  const DeficitRules r3 = zonal_rules(3);
  const double d0 = deficit(4, 3, f, v, r3).deficit;
  for (double k : {-5.0, -1.0, 1.0, 5.0}) CHECK(std::abs(deficit(4, 3, shifted(f, k), shifted(v, k), r3).deficit - d0) < 1e-10);

  const Vec z4 = z_along(4, 0.2);
  const ScalarField f4 = boundary_extremal(4, 4, z4);
  const ScalarField v4 = biharmonic_extension(4, omega_from_z(z4));
  const DeficitRules r4 = zonal_rules(4);
  const DeficitReport base = deficit(4, 4, f4, v4, r4);
  for (double k : {0.5, 2.0, 3.0}) {
    const DeficitReport s = deficit(4, 4, scaled(f4, k), scaled(v4, k), r4);
    CHECK(std::abs(s.deficit - k * k * base.deficit) <= 1e-10 * k * k * base.rhs);
  }
}

TEST_CASE("preconditions name the failing boundary condition") {
  const Vec z = z_along(3, 0.3);
  const ScalarField f = boundary_extremal(4, 3, z);
  const ScalarField v = biharmonic_extension(3, omega_from_z(z));
  // right trace, wrong Neumann data
  const ScalarField wrong = make_field(Chart::Ball, 3, [v](std::span<const double> X) { return v(X) + 0.2 * (1.0 - norm_sq(X)); }, "bent");
  try {
    deficit(4, 3, f, wrong, zonal_rules(3));
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("eta") != std::string::npos);
  }
  const ScalarField off = shifted(biharmonic_extension(3, omega_from_z(z)), 0.1);
  CHECK_THROWS_AS(deficit(4, 3, f, off, zonal_rules(3)), PreconditionError);
}

TEST_CASE("volumes of the half-space family") {
  const VolumeReport r = volumes_and_alpha(halfspace_solution({{0, 0, 0}, 1.0, 0.0}));
  CHECK(std::abs(r.boundary_volume - 2 * kPi * kPi) < 1e-6);
  CHECK(std::abs(r.alpha - 2.0) < 1e-6);
  CHECK_FALSE(r.boundary_divergent);
  CHECK_FALSE(r.interior_divergent);
  const VolumeReport p = volumes_and_alpha(halfspace_solution({{0, 0, 0}, 1.0, 1.0}));
  CHECK(std::abs(p.boundary_volume - 2 * kPi * kPi) < 1e-6);
  CHECK(p.interior_divergent);
  const ScalarField cubic = make_field(Chart::HalfSpace, 3, [](std::span<const double> X) { return 2.0 / 3.0 * std::pow(X[3], 3); }, "t3");
  const VolumeReport c = volumes_and_alpha(cubic);
  CHECK(c.boundary_divergent);
  CHECK(c.interior_divergent);
}

TEST_CASE("energy identity for the n = 4 extremal, and its quadratic scaling") {
  const Vec z = z_along(4, 0.2);
  const ScalarField v = biharmonic_extension(4, omega_from_z(z));
  EnergyRules er;
  er.halfspace_res = 8;
  er.halfspace_res_check = 6;
  er.sphere = sphere_rule(4, 24, 1);
  er.ball = ball_rule(4, 24, 24, 1);
  er.cfg.richardson_levels = 1;
  const EnergyIdentity e = energy_identity(v, 4, er);
  CHECK(e.relative_gap < 1e-4);
  const EnergyIdentity e2 = energy_identity(scaled(v, 2.0), 4, er);
  CHECK(e2.left == doctest::Approx(4 * e.left).epsilon(1e-12));
  CHECK(e2.gap <= 4 * e.gap + 1e-10 * e2.left);
}
