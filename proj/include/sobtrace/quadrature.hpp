#pragma once

// Quadrature on intervals, spheres, balls and compactified R^n / R^{n+1}_+.
//
// Product rules are stored factored (directions x radii) and expanded on the fly, so a
// 10^7-node ball rule costs a few MB. Integration is deterministic: nodes are split into
// fixed-size chunks, each chunk is summed with Neumaier compensation, and the chunk
// partials are reduced in chunk order. The OpenMP kernel and the serial reference produce
// bit-identical results for any thread count.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "sobtrace/errors.hpp"
#include "sobtrace/vec.hpp"

namespace sobtrace {

enum class Domain { Interval, Sphere, Ball, Euclidean, HalfSpace };

const char* to_string(Domain d);

struct RuleMeta {
  int res_radial = 0;
  int res_polar = 0;
  int res_inner = 0;
  double scale = 1.0;
};

struct QuadRule {
  Domain domain = Domain::Interval;
  int dim = 1;               // ambient dimension of the nodes
  Vec base_nodes;            // flattened, dim entries per node; unit directions for product rules
  Vec base_weights;
  Vec radii;                 // empty for explicit (non-product) rules
  Vec radial_weights;        // Jacobian and r^{dim-1} included
  Vec center;                // empty means the origin
  RuleMeta meta;

  bool is_product() const { return !radii.empty(); }
  std::size_t base_size() const { return base_weights.size(); }
  std::size_t size() const { return is_product() ? radii.size() * base_size() : base_size(); }

  /// Writes node i into x (size dim) and returns its weight.
  double node(std::size_t i, std::span<double> x) const {
    const std::size_t nb = base_size();
    const std::size_t ib = is_product() ? i % nb : i;
    const double* d = base_nodes.data() + ib * static_cast<std::size_t>(dim);
    double w = base_weights[ib];
    if (is_product()) {
      const std::size_t ir = i / nb;
      const double r = radii[ir];
      for (int k = 0; k < dim; ++k) x[k] = r * d[k];
      w *= radial_weights[ir];
    } else {
      for (int k = 0; k < dim; ++k) x[k] = d[k];
    }
    if (!center.empty())
      for (int k = 0; k < dim; ++k) x[k] += center[k];
    return w;
  }

  double total_weight() const;
  QuadRule recentered(Vec c) const;
};

/// 1D nodes/weights pair used to assemble product rules.
struct Rule1D {
  Vec x;
  Vec w;
};

/// Gauss-Legendre on [a, b] (Newton on the Legendre recurrence).
Rule1D gauss_legendre_1d(int m, double a = -1.0, double b = 1.0);
/// Gauss-Gegenbauer for the weight (1 - s^2)^{mu - 1/2} on [-1, 1], mu > 0.
Rule1D gauss_gegenbauer_1d(int m, double mu);

/// Interval rules, exact on polynomials of degree <= 2m - 1 (times the weight for Gegenbauer).
QuadRule gauss_legendre(int m);
QuadRule gauss_gegenbauer(int m, double mu);

/// Product rule on S^n embedded in R^{n+1}. The polar coordinate s = xi_1 uses res_polar
/// Gauss-Gegenbauer nodes (weight (1-s^2)^{(n-2)/2}); the inner S^{n-1} factors use
/// res_inner; the S^1 factor uses 2*res equispaced angles. Functions zonal about e_1 are
/// integrated exactly in the inner factors for any res_inner >= 1.
QuadRule sphere_rule(int n, int res);
QuadRule sphere_rule(int n, int res_polar, int res_inner);

/// Radial Gauss-Legendre on [0,1] with weight r^n times sphere_rule(n, ...).
QuadRule ball_rule(int n, int res_r, int res_s);
QuadRule ball_rule(int n, int res_r, int res_s, int res_inner);

/// r = scale * tan(s), s in [0, pi/2), Gauss-Legendre in s, times directions of S^{d-1}
/// (Euclidean) or of the upper hemisphere {sigma_d >= 0} (HalfSpace, d = ambient_dim).
QuadRule compactified_rule(Domain domain, int ambient_dim, int res, double scale = 1.0, int res_angular = 0,
                           Vec center = {});

/// Radial factor of a spherical-coordinates rule, weights already include r^{dim-1}.
struct RadialRule {
  Vec r;
  Vec w;
};

/// Dyadic composite Gauss-Legendre on [0, rho]: [rho 2^{-k-1}, rho 2^{-k}] for k < levels,
/// plus [0, rho 2^{-levels}], q nodes each. Resolves kernels concentrated near r = 0.
RadialRule radial_dyadic(double rho, int levels, int q, int dim);
/// Tail [rho, infinity) via r = rho (1 + tan s), Gauss-Legendre in s.
RadialRule radial_tail(double rho, int m, int dim);
RadialRule concat(RadialRule a, const RadialRule& b);

/// Product of a radial factor with a direction rule (a Sphere rule), centred at `center`.
QuadRule spherical_product(const RadialRule& radial, const QuadRule& directions, Vec center, Domain domain);

// ---------------------------------------------------------------------------------------
// Deterministic integration

struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

inline constexpr std::size_t kQuadChunk = 1024;

namespace detail {

template <class R>
inline std::optional<double> as_optional(R&& v) {
  if constexpr (std::is_convertible_v<std::decay_t<R>, double>) {
    const double d = static_cast<double>(v);
    if (!std::isfinite(d)) return std::nullopt;
    return d;
  } else {
    if (!v || !std::isfinite(*v)) return std::nullopt;
    return *v;
  }
}

[[noreturn]] void throw_singular_node(std::size_t index);

template <class F>
CompensatedSum sum_chunk(const QuadRule& rule, F& f, std::size_t begin, std::size_t end, std::span<double> x,
                         std::size_t& bad) {
  CompensatedSum acc;
  for (std::size_t i = begin; i < end; ++i) {
    const double w = rule.node(i, x);
    auto v = as_optional(f(std::span<const double>(x.data(), x.size())));
    if (!v) {
      bad = std::min(bad, i);
      continue;
    }
    acc.add(w * *v);
  }
  return acc;
}

inline double reduce_partials(const std::vector<CompensatedSum>& parts) {
  CompensatedSum total;
  for (const auto& p : parts) total.add(p.sum);
  for (const auto& p : parts) total.add(p.comp);
  return total.value();
}

}  // namespace detail

/// OpenMP kernel. f(span<const double>) returns double or optional<double>; a nullopt or
/// non-finite value raises SingularPointError naming the first offending node.
template <class F>
double integrate(const QuadRule& rule, F&& f) {
  const std::size_t n = rule.size();
  const std::size_t chunks = (n + kQuadChunk - 1) / kQuadChunk;
  std::vector<CompensatedSum> parts(chunks);
  std::size_t bad = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;
#pragma omp parallel
  {
    Vec x(static_cast<std::size_t>(rule.dim));
    std::size_t local_bad = std::numeric_limits<std::size_t>::max();
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
      const std::size_t b = static_cast<std::size_t>(c) * kQuadChunk;
      try {
        parts[static_cast<std::size_t>(c)] = detail::sum_chunk(rule, f, b, std::min(n, b + kQuadChunk), x, local_bad);
      } catch (...) {
#pragma omp critical(sobtrace_integrate_error)
        if (!error) error = std::current_exception();
      }
    }
#pragma omp critical(sobtrace_integrate_bad)
    bad = std::min(bad, local_bad);
  }
  if (error) std::rethrow_exception(error);
  if (bad != std::numeric_limits<std::size_t>::max()) detail::throw_singular_node(bad);
  return detail::reduce_partials(parts);
}

/// Serial reference with the same chunking; bit-identical to integrate().
template <class F>
double integrate_serial(const QuadRule& rule, F&& f) {
  const std::size_t n = rule.size();
  const std::size_t chunks = (n + kQuadChunk - 1) / kQuadChunk;
  std::vector<CompensatedSum> parts(chunks);
  std::size_t bad = std::numeric_limits<std::size_t>::max();
  Vec x(static_cast<std::size_t>(rule.dim));
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t b = c * kQuadChunk;
    parts[c] = detail::sum_chunk(rule, f, b, std::min(n, b + kQuadChunk), x, bad);
  }
  if (bad != std::numeric_limits<std::size_t>::max()) detail::throw_singular_node(bad);
  return detail::reduce_partials(parts);
}

/// Parallel evaluation of f at every node into a vector (node order).
template <class F>
Vec evaluate_nodes(const QuadRule& rule, F&& f) {
  const std::size_t n = rule.size();
  Vec out(n);
  std::exception_ptr error;
#pragma omp parallel
  {
    Vec x(static_cast<std::size_t>(rule.dim));
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      rule.node(static_cast<std::size_t>(i), x);
      try {
        out[static_cast<std::size_t>(i)] = f(std::span<const double>(x));
      } catch (...) {
#pragma omp critical(sobtrace_evaluate_error)
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

/// log of the integral of exp(g) without overflow.
template <class F>
double integrate_log_exp(const QuadRule& rule, F&& g) {
  const Vec vals = evaluate_nodes(rule, g);
  double m = -std::numeric_limits<double>::infinity();
  for (double v : vals) {
    if (!std::isfinite(v)) throw SingularPointError("integrate_log_exp: non-finite exponent");
    m = std::max(m, v);
  }
  CompensatedSum acc;
  Vec x(static_cast<std::size_t>(rule.dim));
  for (std::size_t i = 0; i < vals.size(); ++i) acc.add(rule.node(i, x) * std::exp(vals[i] - m));
  return m + std::log(acc.value());
}

// ---------------------------------------------------------------------------------------
// Logarithmic kernel on R^3

using Density = std::function<double(std::span<const double>)>;

struct LogKernelOptions {
  double split_radius = 1.0;     // rho: dyadic near field on B_rho(x), compactified tail beyond
  int dyadic_levels = 8;
  int dyadic_nodes = 10;
  int tail_nodes = 60;
  int angular_res = 32;          // polar resolution of the S^2 direction rule
  Vec density_center = {0.0, 0.0, 0.0};
  double density_scale = 1.0;
  double far_switch = 8.0;       // targets with |x - center| > far_switch * scale use a density-centred rule
  int far_res = 64;
  bool check_refinement = false;
  double refinement_tol = 1e-6;
};

/// v(x,t) = (1/|S^3|) int_{R^3} f(y) log(|y|^2/(|x-y|^2 + t^2)) dy.
///
/// The constant part int f log|y|^2 is computed once at construction. Targets near the
/// density use a rule centred at x (dyadic near field + tan-compactified tail), which moves
/// rigidly with x so finite differences of the result are smooth; distant targets use a
/// compactified rule centred at the density.
class LogKernelIntegrator {
 public:
  LogKernelIntegrator(Density f, LogKernelOptions opts = {});

  double operator()(std::span<const double> target) const;
  /// Integral of f log(|x-y|^2 + t^2) (without the log|y|^2 part and the 1/|S^3| factor).
  double shifted_log_integral(std::span<const double> target) const;
  double log_abs_y_integral() const { return c0_; }
  const LogKernelOptions& options() const { return opts_; }

 private:
  Density f_;
  LogKernelOptions opts_;
  QuadRule directions_;
  RadialRule radial_;
  QuadRule near_rule_;
  QuadRule far_rule_;
  double c0_ = 0.0;
};

/// One-shot evaluation; with opts.check_refinement the value is recomputed at doubled
/// resolution and ConvergenceError is raised if the two disagree beyond refinement_tol.
double log_kernel_integrate(const Density& f, std::span<const double> target, const LogKernelOptions& opts = {});

LogKernelOptions refined(const LogKernelOptions& o);

}  // namespace sobtrace
