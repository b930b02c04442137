#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sobtrace/closed_forms.hpp"
#include "sobtrace/kernels.hpp"
#include "sobtrace/sampling.hpp"

using namespace sobtrace;
constexpr double kPi = std::numbers::pi;

TEST_CASE("kernel values") {
  const Vec o{0, 0, 0};
  CHECK(kernel_eval(harmonic_kernel(), o, 1.0, o) == doctest::Approx(1.0 / (kPi * kPi)));
  CHECK(kernel_eval(biharmonic_kernel(3), o, 1.0, o) == doctest::Approx(4.0 / (kPi * kPi)));
  CHECK(biharmonic_kernel().t_power == 3);
  CHECK(harmonic_kernel().denominator_power() == 2);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const Vec x = rng.in_ball(3, 2), y = rng.in_ball(3, 2);
    const double d = std::sqrt(dist_sq(x, y));
    const Vec x2{0, 0, 0}, y2{0, d, 0};
    for (const KernelSpec& k : {harmonic_kernel(), biharmonic_kernel(3), biharmonic_kernel(1)})
      CHECK(kernel_eval(k, x, 0.7, y) == doctest::Approx(kernel_eval(k, y2, 0.7, x2)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(kernel_eval(harmonic_kernel(), o, 0.0, o), DomainError);
  CHECK_THROWS_AS(biharmonic_kernel(2), DomainError);
}

TEST_CASE("normalization: Poisson kernels have unit mass, the t^1 variant has mass t^-2") {
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(std::abs(normalization_check(harmonic_kernel(), t) - 1.0) < 1e-8);
    CHECK(std::abs(normalization_check(biharmonic_kernel(3), t) - 1.0) < 1e-8);
    CHECK(normalization_check(biharmonic_kernel(1), t) == doctest::Approx(1.0 / (t * t)).epsilon(1e-8));
  }
}

TEST_CASE("the kernels solve their equations in (x, t)") {
  Rng rng(2);
  const StencilConfig cfg = third_order_stencil();
  for (int i = 0; i < 6; ++i) {
    const Vec y = rng.in_ball(3, 1.0);
    const ScalarField Kb = kernel_field(biharmonic_kernel(3), y);
    const ScalarField Kh = kernel_field(harmonic_kernel(), y);
    Vec X = rng.in_ball(4, 1.0);
    X[3] = 0.5 + std::abs(X[3]);
    CHECK(std::abs(bilaplacian(Kb, X, cfg)) < 2e-6);
    CHECK(std::abs(laplacian(Kh, X, cfg)) < 1e-8);
  }
}

TEST_CASE("biharmonic Poisson extension reproduces u_{0,1}") {
  const ScalarField u = halfspace_solution({{0, 0, 0}, 1.0, 0.0});
  const Density g = [u](std::span<const double> y) { return u(Vec{y[0], y[1], y[2], 0.0}); };
  const Vec x{0, 0, 0};
  CHECK(std::abs(apply_kernel(biharmonic_kernel(3), g, x, 1.0) - u(Vec{0, 0, 0, 1})) < 1e-3);
  CHECK(std::abs(apply_kernel(harmonic_kernel(), [](std::span<const double>) { return 1.0; }, x, 0.3) - 1.0) < 1e-8);
  double prev = 1e300;
  for (double t : {0.2, 0.1, 0.05}) {
    const double gap = std::abs(apply_kernel(biharmonic_kernel(3), g, x, t) - g(x));
    CHECK(gap < prev);
    prev = gap;
  }
  // Neumann-zero extension: one-sided d/dt at t = 0 vanishes
  const Vec x1{0.4, 0.0, 0.0};
  const double h = 1e-2;
  const double d = (4.0 * apply_kernel(biharmonic_kernel(3), g, x1, h) - apply_kernel(biharmonic_kernel(3), g, x1, 2 * h) - 3.0 * g(x1)) / (2 * h);
  CHECK(std::abs(d) < 1e-3);
}

TEST_CASE("Laplacian representation of the log-kernel field") {
  const Vec a{0, 0, 0};
  const Density f = extremal_boundary_density(a, 1.0);
  const ScalarField v = log_kernel_field(f, extremal_log_options(a, 1.0));
  for (const Vec& X : {Vec{0, 0, 0, 1}, Vec{0.5, -0.3, 0.2, 0.6}})
    CHECK(std::abs(laplacian(v, X) - laplacian_representation(f, X)) < 1e-3);
}

TEST_CASE("log-kernel system residuals are linear in f") {
  const Vec a{0, 0, 0};
  const Density f = extremal_boundary_density(a, 1.0);
  const Density f2 = [f](std::span<const double> y) { return 2.0 * f(y); };
  const LogKernelOptions o = extremal_log_options(a, 1.0);
  StencilConfig cfg;
  cfg.richardson_levels = 1;
  const std::vector<Vec> boundary = {{0.3, 0.1, 0.0, 0.0}};
  const SystemResidual r1 = lemma31_system_check(f, {}, boundary, cfg, o);
  const SystemResidual r2 = lemma31_system_check(f2, {}, boundary, cfg, o);
  CHECK(r1.boundary("neumann_laplacian") < 1e-3);
  CHECK(r2.boundary("neumann") == doctest::Approx(2.0 * r1.boundary("neumann")).epsilon(1e-6).scale(1e-12));
  CHECK(r2.boundary("neumann_laplacian") < 2e-3);
}

TEST_CASE("corollary: representation matches u_{a,lambda} up to the constant u_{a,lambda}(0,0)") {
  const auto targets = corollary_targets(3, 8);
  for (const Vec& a : {Vec{0, 0, 0}, Vec{0.5, 0.2, 0}}) {
    const CorollaryReport r = corollary_selfconsistency(a, 1.5, targets, {}, extremal_log_options(a, 1.5));
    const double expected = std::log(3.0 / (2.25 + norm_sq(a)));
    CHECK(r.offset == doctest::Approx(expected).epsilon(1e-6));
    CHECK(r.offset_gap < 1e-3);
    CHECK(r.worst_gap == doctest::Approx(std::abs(expected)).epsilon(1e-3));
    CHECK(std::abs(r.c1.mean) < 1e-3);
  }
  // (a, lambda) with 2 lambda = lambda^2 + |a|^2 have u(0,0) = 0: the literal identity holds.
  const Vec a{1, 0, 0};
  const CorollaryReport lit = corollary_selfconsistency(a, 1.0, corollary_targets(), {}, extremal_log_options(a, 1.0));
  CHECK(lit.worst_gap < 1e-3);
  CHECK(lit.targets == 20);
  CHECK(lit.boundary_targets == 4);
}
