#pragma once

// Poisson kernels of Delta and Delta^2 on R^4_+, the log-kernel representation and the
// half-space self-consistency checks built on them.

#include <cstdint>
#include <span>
#include <vector>

#include "sobtrace/diffops.hpp"
#include "sobtrace/field.hpp"
#include "sobtrace/quadrature.hpp"
#include "sobtrace/residuals.hpp"

namespace sobtrace {

enum class KernelKind { Harmonic, Biharmonic };

const char* to_string(KernelKind k);

struct KernelSpec {
  KernelKind kind = KernelKind::Harmonic;
  int t_power = 1;
  double normalization = 0.0;

  int denominator_power() const { return kind == KernelKind::Harmonic ? 2 : 3; }
};

/// (2/|S^3|) t / (|x-y|^2 + t^2)^2.
KernelSpec harmonic_kernel();
/// (4/pi^2) t^p / (|x-y|^2 + t^2)^3. Only p = 3 is normalized; p = 1 is the variant without
/// the t^2 factor, kept to measure its t^{-2} mass.
KernelSpec biharmonic_kernel(int t_power = 3);

double kernel_eval(const KernelSpec& spec, std::span<const double> x, double t, std::span<const double> y);

/// Same kernel as a function of X = (x, t) for a fixed boundary point y.
ScalarField kernel_field(const KernelSpec& spec, std::span<const double> y);

/// int_{R^3} K(0, t, y) dy on `rule`, a compactified Euclidean rule in R^3.
double normalization_check(const KernelSpec& spec, double t, const QuadRule& rule);
/// Same with compactified_rule(Euclidean, 3, res, scale = t).
double normalization_check(const KernelSpec& spec, double t, int res = 48);

/// int K(x, t, y) g(y) dy with the compactified rule recentred at y = x and scaled by t.
double apply_kernel(const KernelSpec& spec, const Density& g, std::span<const double> x, double t, int res = 96);

/// Half-space field v(x,t) = (1/|S^3|) int f(y) log(|y|^2/(|x-y|^2 + t^2)) dy, n = 3.
/// Domain margin is 0, so derivatives at t = 0 use one-sided stencils.
ScalarField log_kernel_field(const Density& f, const LogKernelOptions& opts = {});

/// -(4/|S^3|) int f(y) / (|x-y|^2 + t^2) dy.
double laplacian_representation(const Density& f, std::span<const double> X, int res = 96);

/// Delta^2 v at interior samples; "neumann_laplacian" |d_t Delta v - 4 f| and "neumann"
/// |d_t v| at boundary points (x, 0).
SystemResidual lemma31_system_check(const Density& f, const std::vector<Vec>& interior,
                                    const std::vector<Vec>& boundary, const StencilConfig& cfg = {},
                                    const LogKernelOptions& opts = {});

struct ConstantEstimate {
  double mean = 0.0;
  double spread = 0.0;   // max deviation from the mean
};

/// Delta u(X) + (4/|S^3|) int e^{3u(y,0)}/(|x-y|^2+t^2) dy averaged over the samples. For a
/// solution this is -C_1.
ConstantEstimate laplacian_constant(const ScalarField& u, const Density& boundary_density,
                                    const std::vector<Vec>& samples, const StencilConfig& cfg = {}, int res = 96);

struct CorollaryReport {
  double worst_gap = 0.0;          // max |u - v| over all targets
  double fixed_point_gap = 0.0;    // max over boundary targets of |u(x,0) - v(x,0)/2|  (c0 = 0)
  double offset = 0.0;             // u - v at the origin
  double offset_gap = 0.0;         // max |u - v - offset|
  double far_gap = 0.0;            // |u - v - offset| at the far target, if any
  double far_log_ratio = 0.0;      // u(X)/log|X| at the far target
  ConstantEstimate c1;             // Delta u representation constant
  std::size_t targets = 0;
  std::size_t boundary_targets = 0;
};

/// Compares u_{a,lambda} with its log-kernel representation at `targets` (points of the closed
/// half-space; t = 0 marks boundary targets). `far_target` (optional, empty to skip) is
/// reported separately.
CorollaryReport corollary_selfconsistency(std::span<const double> a, double lambda, const std::vector<Vec>& targets,
                                          const Vec& far_target = {}, const LogKernelOptions& opts = {},
                                          const StencilConfig& cfg = {});

/// 20 deterministic targets with |X| <= 3, four of them on t = 0.
std::vector<Vec> corollary_targets(std::uint64_t seed = 7, std::size_t count = 20);

/// Density e^{3 u_{a,lambda}(y, 0)} = (2 lambda / (lambda^2 + |y - a|^2))^3.
Density extremal_boundary_density(std::span<const double> a, double lambda);
/// Options with the density centre and scale set for u_{a,lambda}.
LogKernelOptions extremal_log_options(std::span<const double> a, double lambda, LogKernelOptions base = {});

}  // namespace sobtrace
