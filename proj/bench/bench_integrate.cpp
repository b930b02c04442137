// OpenMP integrate() against the serial reference on the same rules and integrands.
// Both sum the same chunks in the same order, so results agree bit for bit; only wall time differs.

#include <benchmark/benchmark.h>

#include <cmath>

#include "sobtrace/closed_forms.hpp"
#include "sobtrace/diffops.hpp"
#include "sobtrace/quadrature.hpp"

using namespace sobtrace;

namespace {

// Cheap integrand: closed-form extremal on B^4.
ScalarField extremal() {
  Vec z(4, 0.0);
  z[0] = 0.3;
  return biharmonic_extension(3, omega_from_z(z));
}

template <bool Parallel>
void BM_closed_form(benchmark::State& state) {
  const QuadRule rule = ball_rule(3, static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  const ScalarField v = extremal();
  for (auto _ : state) {
    const double s = Parallel ? integrate(rule, [&](std::span<const double> X) { return v(X); })
                              : integrate_serial(rule, [&](std::span<const double> X) { return v(X); });
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(rule.size()));
}

// Expensive integrand: |Delta v|^2 by finite differences, the inner loop of the deficit.
template <bool Parallel>
void BM_bilaplacian_energy(benchmark::State& state) {
  const QuadRule rule = ball_rule(3, static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 1);
  const ScalarField v = extremal();
  const StencilConfig cfg;
  const auto g = [&](std::span<const double> X) {
    const double l = laplacian(v, X, cfg);
    return l * l;
  };
  for (auto _ : state) {
    const double s = Parallel ? integrate(rule, g) : integrate_serial(rule, g);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(rule.size()));
}

}  // namespace

BENCHMARK(BM_closed_form<false>)->Name("closed_form/serial")->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_closed_form<true>)->Name("closed_form/openmp")->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bilaplacian_energy<false>)->Name("laplacian_energy/serial")->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bilaplacian_energy<true>)->Name("laplacian_energy/openmp")->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
