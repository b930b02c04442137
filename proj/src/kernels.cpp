#include "sobtrace/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "sobtrace/closed_forms.hpp"
#include "sobtrace/errors.hpp"
#include "sobtrace/parallel.hpp"
#include "sobtrace/sampling.hpp"

namespace sobtrace {

namespace {

constexpr double kPi = std::numbers::pi;

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

void require_point3(std::span<const double> x, const char* what) {
  if (x.size() != 3) throw DomainError(std::string(what) + ": boundary points must lie in R^3");
}

}  // namespace

const char* to_string(KernelKind k) { return k == KernelKind::Harmonic ? "harmonic" : "biharmonic"; }

KernelSpec harmonic_kernel() { return {KernelKind::Harmonic, 1, 2.0 / sphere_area(3)}; }

KernelSpec biharmonic_kernel(int t_power) {
  if (t_power != 1 && t_power != 3) throw DomainError("biharmonic_kernel: t_power must be 1 or 3");
  return {KernelKind::Biharmonic, t_power, 4.0 / (kPi * kPi)};
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, double t, std::span<const double> y) {
  require_point3(x, "kernel_eval");
  require_point3(y, "kernel_eval");
  if (!(t > 0.0)) throw DomainError("kernel_eval: t must be > 0");
  const double q = dist_sq(x, y) + t * t;
  return spec.normalization * ipow(t, spec.t_power) / ipow(q, spec.denominator_power());
}

ScalarField kernel_field(const KernelSpec& spec, std::span<const double> y) {
  require_point3(y, "kernel_field");
  const Vec yc(y.begin(), y.end());
  FieldDomain dom;
  dom.singular_points.push_back({yc[0], yc[1], yc[2], 0.0});
  dom.exclusion_radius = 1e-8;
  return ScalarField(
      Chart::HalfSpace, 3,
      [spec, yc](std::span<const double> X) {
        const double q = dist_sq(X.first(3), yc) + X[3] * X[3];
        return spec.normalization * ipow(X[3], spec.t_power) / ipow(q, spec.denominator_power());
      },
      std::string(to_string(spec.kind)) + " kernel", dom,
      [yc](std::span<const double> X) { return std::min(1.0, 0.25 * std::sqrt(dist_sq(X.first(3), yc) + X[3] * X[3])); });
}

double normalization_check(const KernelSpec& spec, double t, const QuadRule& rule) {
  if (!(t > 0.0)) throw DomainError("normalization_check: t must be > 0");
  if (rule.domain != Domain::Euclidean || rule.dim != 3)
    throw DomainError("normalization_check: need a compactified Euclidean rule on R^3");
  const double x[3] = {0.0, 0.0, 0.0};
  return integrate(rule, [&](std::span<const double> y) { return kernel_eval(spec, x, t, y); });
}

double normalization_check(const KernelSpec& spec, double t, int res) {
  return normalization_check(spec, t, compactified_rule(Domain::Euclidean, 3, res, t));
}

double apply_kernel(const KernelSpec& spec, const Density& g, std::span<const double> x, double t, int res) {
  require_point3(x, "apply_kernel");
  if (!(t > 0.0)) throw DomainError("apply_kernel: t must be > 0");
  const QuadRule rule = compactified_rule(Domain::Euclidean, 3, res, t, 0, Vec(x.begin(), x.end()));
  return integrate(rule, [&](std::span<const double> y) { return kernel_eval(spec, x, t, y) * g(y); });
}

ScalarField log_kernel_field(const Density& f, const LogKernelOptions& opts) {
  auto integ = std::make_shared<const LogKernelIntegrator>(f, opts);
  const double scale = opts.density_scale;
  return ScalarField(
      Chart::HalfSpace, 3, [integ](std::span<const double> X) { return (*integ)(X); }, "log-kernel representation",
      FieldDomain{}, [scale](std::span<const double>) { return std::min(1.0, scale); });
}

double laplacian_representation(const Density& f, std::span<const double> X, int res) {
  if (X.size() != 4) throw DomainError("laplacian_representation: X must be (x, t)");
  const double t = X[3];
  if (!(t > 0.0)) throw DomainError("laplacian_representation: t must be > 0");
  const Vec x(X.begin(), X.begin() + 3);
  const QuadRule rule = compactified_rule(Domain::Euclidean, 3, res, t, 0, x);
  const double I = integrate(rule, [&](std::span<const double> y) { return f(y) / (dist_sq(x, y) + t * t); });
  return -4.0 / sphere_area(3) * I;
}

SystemResidual lemma31_system_check(const Density& f, const std::vector<Vec>& interior,
                                    const std::vector<Vec>& boundary, const StencilConfig& cfg,
                                    const LogKernelOptions& opts) {
  const ScalarField v = log_kernel_field(f, opts);
  SystemResidual r;
  r.interior_samples = interior.size();
  r.boundary_samples = boundary.size();
  auto sup = [](const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
  };
  r.interior_sup = sup(parallel_map(interior.size(), [&](std::size_t i) { return bilaplacian(v, interior[i], cfg); }));
  const auto nl = parallel_map(boundary.size(), [&](std::size_t i) {
    const Vec& X = boundary[i];
    return boundary_normal(v, X, NormalKind::DtDeltaU, cfg) - 4.0 * f(std::span<const double>(X).first(3));
  });
  const auto neu = parallel_map(boundary.size(), [&](std::size_t i) {
    return boundary_normal(v, boundary[i], NormalKind::DtU, cfg);
  });
  r.boundary_sups = {{"neumann_laplacian", sup(nl)}, {"neumann", sup(neu)}};
  return r;
}

ConstantEstimate laplacian_constant(const ScalarField& u, const Density& boundary_density,
                                    const std::vector<Vec>& samples, const StencilConfig& cfg, int res) {
  if (samples.empty()) throw DomainError("laplacian_constant: no samples");
  const auto d = parallel_map(samples.size(), [&](std::size_t i) {
    return laplacian(u, samples[i], cfg) - laplacian_representation(boundary_density, samples[i], res);
  });
  ConstantEstimate c;
  for (double x : d) c.mean += x;
  c.mean /= static_cast<double>(d.size());
  for (double x : d) c.spread = std::max(c.spread, std::abs(x - c.mean));
  return c;
}

Density extremal_boundary_density(std::span<const double> a, double lambda) {
  require_point3(a, "extremal_boundary_density");
  if (!(lambda > 0.0)) throw DomainError("extremal_boundary_density: lambda must be > 0");
  const Vec ac(a.begin(), a.end());
  return [ac, lambda](std::span<const double> y) {
    const double g = 2.0 * lambda / (lambda * lambda + dist_sq(y.first(3), ac));
    return g * g * g;
  };
}

LogKernelOptions extremal_log_options(std::span<const double> a, double lambda, LogKernelOptions base) {
  base.density_center.assign(a.begin(), a.end());
  base.density_scale = lambda;
  base.split_radius = lambda;
  return base;
}

std::vector<Vec> corollary_targets(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<Vec> out;
  const std::size_t nb = std::min<std::size_t>(4, count);
  for (std::size_t i = 0; i < count; ++i) {
    if (i < nb) {
      const Vec d = rng.unit_vector(3);
      const double r = rng.uniform(0.2, 2.5);
      out.push_back({r * d[0], r * d[1], r * d[2], 0.0});
    } else {
      Vec X = rng.unit_vector(4);
      X[3] = std::abs(X[3]);
      const double r = rng.uniform(0.3, 3.0);
      for (double& c : X) c *= r;
      X[3] = std::max(X[3], 0.1);
      out.push_back(X);
    }
  }
  return out;
}

CorollaryReport corollary_selfconsistency(std::span<const double> a, double lambda, const std::vector<Vec>& targets,
                                          const Vec& far_target, const LogKernelOptions& opts,
                                          const StencilConfig& cfg) {
  require_point3(a, "corollary_selfconsistency");
  const ScalarField u = halfspace_solution({Vec(a.begin(), a.end()), lambda, 0.0});
  const Density f = extremal_boundary_density(a, lambda);
  const LogKernelIntegrator v(f, opts);
  CorollaryReport rep;
  rep.targets = targets.size();
  const double origin[4] = {0.0, 0.0, 0.0, 0.0};
  rep.offset = u(origin) - v(origin);
  const auto pairs = parallel_map(targets.size(), [&](std::size_t i) {
    return std::pair<double, double>{u(targets[i]), v(targets[i])};
  });
  std::vector<Vec> interior;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto [uv, vv] = pairs[i];
    rep.worst_gap = std::max(rep.worst_gap, std::abs(uv - vv));
    rep.offset_gap = std::max(rep.offset_gap, std::abs(uv - vv - rep.offset));
    if (targets[i][3] == 0.0) {
      ++rep.boundary_targets;
      rep.fixed_point_gap = std::max(rep.fixed_point_gap, std::abs(uv - 0.5 * vv));
    } else if (targets[i][3] >= 0.25) {
      interior.push_back(targets[i]);
    }
  }
  if (!far_target.empty()) {
    const double uf = u(far_target), vf = v(far_target);
    rep.far_gap = std::abs(uf - vf - rep.offset);
    rep.far_log_ratio = uf / std::log(norm(far_target));
  }
  if (!interior.empty()) rep.c1 = laplacian_constant(u, f, interior, cfg);
  return rep;
}

}  // namespace sobtrace
