#include "sobtrace/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "sobtrace/chart_geometry.hpp"
#include "sobtrace/closed_forms.hpp"
#include "sobtrace/diffops.hpp"
#include "sobtrace/errors.hpp"
#include "sobtrace/functionals.hpp"
#include "sobtrace/kernels.hpp"
#include "sobtrace/parallel.hpp"
#include "sobtrace/residuals.hpp"
#include "sobtrace/sampling.hpp"
#include "sobtrace/spectral_oracle.hpp"

namespace sobtrace::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_vec(const Vec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

Vec parse_vec(const std::string& s, const char* flag) {
  Vec out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("--") + flag + ": '" + s + "' is not a comma-separated list of numbers");
    }
  }
  if (out.empty()) throw UsageError(std::string("--") + flag + " needs at least one component");
  return out;
}

bool along_e1(const Vec& z) {
  for (std::size_t i = 1; i < z.size(); ++i)
    if (z[i] != 0.0) return false;
  return true;
}

Vec axis_of(const Vec& z0) {
  const double r = norm(z0);
  if (r == 0.0) return unit_vector(static_cast<int>(z0.size()), 0);
  return scaled(z0, 1.0 / r);
}

StencilConfig stencil(const RunConfig& cfg, StencilConfig s = {}) {
  if (cfg.fd_h > 0.0) s.h = cfg.fd_h;
  return s;
}

double beta_for(int n) { return n == 3 ? 0.0 : -0.5 * (n - 3); }

/// Collects checks; a numerical exception inside a stage becomes one failing record.
class Campaign {
 public:
  void add(std::string name, double value, double tol, Relation rel = Relation::AtMost) {
    checks_.push_back(make_check(std::move(name), value, tol, rel));
  }
  void flag(std::string name, bool value, bool expected) {
    checks_.push_back(make_check(std::move(name), value ? 1.0 : 0.0, expected ? 1.0 : 0.0, Relation::Equals));
  }
  void stage(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const UsageError&) {
      throw;
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    } catch (const std::exception& e) {
      std::cerr << name << ": " << e.what() << "\n";
      checks_.push_back({name + ":error", kNaN, kNaN, false});
    }
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  std::vector<Check> checks_;
};

struct Rules {
  QuadRule sphere;
  QuadRule ball;
};

Rules ball_rules(const RunConfig& cfg) {
  return {sphere_rule(cfg.dim, cfg.res_sphere, cfg.res_inner),
          ball_rule(cfg.dim, cfg.res_radial, cfg.res_sphere, cfg.res_inner)};
}

ScalarField extension_for(int order, int n, const Vec& z0) {
  const Vec w = omega_from_z(z0);
  return order == 4 ? biharmonic_extension(n, w) : harmonic_extension(n, w);
}

// ------------------------------------------------------------------------------------------

void verify_extremal(const RunConfig& cfg, Campaign& C) {
  const int n = cfg.dim;
  const StencilConfig sc = stencil(cfg);
  const ScalarField f = boundary_extremal(cfg.order, n, cfg.z0);
  const ScalarField v = extension_for(cfg.order, n, cfg.z0);
  const double tol = cfg.tolerance("residual", 1e-5);
  const auto interior = ball_points(n, cfg.samples, 1.0 - 4.0 * sc.h);
  const auto boundary = sphere_points(n, cfg.samples, cfg.seed);
  C.stage("system", [&] {
    if (cfg.order == 4) {
      const SystemResidual r = ball_system_residual(v, f, beta_for(n), interior, boundary, sc);
      C.add("interior_bilaplacian", r.interior_sup, tol);
      C.add("neumann", r.boundary("neumann"), tol);
      C.add("dirichlet", r.boundary("dirichlet"), tol);
    } else {
      double lap = 0.0, dir = 0.0;
      for (double x : parallel_map(interior.size(), [&](std::size_t i) { return laplacian(v, interior[i], sc); }))
        lap = std::max(lap, std::abs(x));
      for (double x : parallel_map(boundary.size(), [&](std::size_t i) { return v(boundary[i]) - f(boundary[i]); }))
        dir = std::max(dir, std::abs(x));
      C.add("interior_laplacian", lap, tol);
      C.add("dirichlet", dir, tol);
    }
  });
  C.stage("deficit", [&] {
    const Rules rules = ball_rules(cfg);
    StencilConfig dc = sc;
    dc.richardson_levels = 1;
    const DeficitReport d = deficit(cfg.order, n, f, v, {rules.sphere, rules.ball, dc, true});
    C.add("deficit", std::abs(d.deficit), cfg.tolerance("deficit", n == 3 || cfg.order == 2 ? 1e-6 : 1e-5));
  });
}

void deficit_scan(const RunConfig& cfg, Campaign& C) {
  const int n = cfg.dim;
  const StencilConfig sc = [&] {
    StencilConfig s = stencil(cfg);
    s.richardson_levels = 1;
    return s;
  }();
  const Vec axis = axis_of(cfg.z0);
  const ScalarField f0 = boundary_extremal(cfg.order, n, cfg.z0);
  const double margin = [&] {
    const double w = norm(omega_from_z(cfg.z0));
    return w > 0.0 ? std::min(0.5, 0.5 * (1.0 / w - 1.0)) : 0.5;
  }();
  const Rules rules = ball_rules(cfg);
  const DeficitRules dr{rules.sphere, rules.ball, sc, true};
  const double lam = 0.5 * (n - 1);
  C.stage("equality", [&] {
    const DeficitReport d = deficit(cfg.order, n, f0, extension_for(cfg.order, n, cfg.z0), dr);
    C.add("equality_deficit", std::abs(d.deficit), cfg.tolerance("deficit", n == 3 || cfg.order == 2 ? 1e-6 : 1e-5));
  });
  C.stage("perturbations", [&] {
    Rng rng(cfg.seed);
    double min_def = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < cfg.trials; ++trial) {
      Vec coef(cfg.modes + 1);
      for (int k = 0; k <= cfg.modes; ++k) coef[k] = cfg.eps * rng.normal() / (1.0 + k);
      auto eval = [f0, coef, axis, lam](std::span<const double> X) {
        const double s = std::clamp(dot(axis, X) / norm(X), -1.0, 1.0);
        const auto p = gegenbauer_orthonormal(static_cast<int>(coef.size()) - 1, lam, s);
        double g = 0.0;
        for (std::size_t k = 0; k < coef.size(); ++k) g += coef[k] * p[k];
        return f0(X) + g;
      };
      FieldDomain dom = unrestricted_domain();
      dom.singular_points.push_back(Vec(axis.size(), 0.0));
      const ScalarField f(Chart::Ball, n, eval, "perturbed extremal", dom, [](std::span<const double> X) {
        return std::min(1.0, 0.25 * norm(X));
      });
      const ZonalExpansion e = zonal_project(f, axis, cfg.kmax);
      const auto modes = cfg.order == 4 ? solve_modes(e, beta_for(n)) : harmonic_modes(e);
      const ScalarField v = reconstruct(modes, axis, n, margin);
      min_def = std::min(min_def, deficit(cfg.order, n, f, v, dr).deficit);
    }
    C.add("min_perturbed_deficit", min_def, -cfg.tolerance("nonnegativity", 1e-8), Relation::AtLeast);
  });
}

void residual_halfspace(const RunConfig& cfg, Campaign& C) {
  const bool cubic = cfg.family == "cubic";
  const StencilConfig sc = stencil(cfg, cubic ? polynomial_stencil() : StencilConfig{});
  const ScalarField u = cubic ? make_field(Chart::HalfSpace, 3,
                                           [](std::span<const double> X) { return 2.0 / 3.0 * X[3] * X[3] * X[3]; },
                                           "(2/3) t^3")
                              : halfspace_solution({cfg.a, cfg.lambda, cfg.c});
  const double tol = cfg.tolerance("residual", cubic ? 1e-9 : 1e-5);
  const auto interior = halfspace_points(3, cfg.samples, 2.0, 4.0 * sc.h, 2.0);
  std::vector<Vec> boundary;
  for (const Vec& X : halfspace_points(3, cfg.samples, 2.0, 0.0, 1.0)) boundary.push_back({X[0], X[1], X[2], 0.0});
  C.stage("system", [&] {
    const SystemResidual r = halfspace_system_residual(u, Nonlinearity::Exp3, 0.0, interior, boundary, sc);
    C.add("interior_bilaplacian", r.interior_sup, tol);
    C.add("nonlinear", r.boundary("nonlinear"), tol);
    C.add("neumann", r.boundary("neumann"), tol);
  });
  if (!cubic) {
    C.stage("exact_values", [&] {
      const double lam = cfg.lambda;
      for (int k = 0; k < 3; ++k) {
        const Vec X = {cfg.a[0] + k * lam, cfg.a[1], cfg.a[2], 0.0};
        const double q = 2.0 * lam / (lam * lam + k * k * lam * lam);
        const double got = boundary_normal(u, X, NormalKind::DtDeltaU, sc);
        C.add("dt_laplacian_x=a+" + std::to_string(k) + "lambda_e1", std::abs(got - 4.0 * q * q * q),
              cfg.tolerance("exact", 1e-5));
      }
      if (norm(cfg.a) == 0.0 && cfg.lambda == 1.0) {
        const ScalarField u1 = make_field(
            Chart::HalfSpace, 3,
            [](std::span<const double> X) {
              const double t = X[3];
              return std::log(2.0 / ((1.0 + t) * (1.0 + t) + X[0] * X[0] + X[1] * X[1] + X[2] * X[2]));
            },
            "u1");
        const double origin[4] = {0.0, 0.0, 0.0, 0.0};
        C.add("laplacian_u1_origin", std::abs(laplacian(u1, origin, sc) + 4.0), cfg.tolerance("exact_lap", 1e-7));
      }
    });
  }
  C.stage("volumes", [&] {
    const VolumeReport vr = volumes_and_alpha(u);
    if (cubic) {
      C.flag("boundary_divergent", vr.boundary_divergent, true);
      C.flag("interior_divergent", vr.interior_divergent, true);
      return;
    }
    const double vt = cfg.tolerance("volume", 1e-6);
    C.add("boundary_volume", std::abs(vr.boundary_volume - 2.0 * kPi * kPi), vt);
    C.add("alpha", std::abs(vr.alpha - 2.0), vt);
    C.flag("boundary_divergent", vr.boundary_divergent, false);
    C.flag("interior_divergent", vr.interior_divergent, cfg.c > 0.0);
  });
  if (!cubic) {
    C.stage("lower_bound", [&] {
      std::vector<Vec> rays;
      Rng rng(cfg.seed);
      for (int i = 0; i < 8; ++i) {
        Vec d = rng.unit_vector(4);
        d[3] = std::abs(d[3]);
        rays.push_back(d);
      }
      const ScalarField u0 = halfspace_solution({cfg.a, cfg.lambda, 0.0});
      const LowerBoundCheck lb = log_lower_bound_check(u0, 2.0, rays);
      C.flag("log_lower_bound_bounded", lb.bounded, true);
    });
  }
}

void kernel_check(const RunConfig& cfg, Campaign& C) {
  const double ktol = cfg.tolerance("kernel", 1e-8);
  const int res = cfg.res_radial;
  C.stage("normalization", [&] {
    for (double t : {0.5, 1.0, 2.0}) {
      C.add("harmonic_mass_t=" + fmt(t), std::abs(normalization_check(harmonic_kernel(), t, res) - 1.0), ktol);
      C.add("biharmonic_t3_mass_t=" + fmt(t), std::abs(normalization_check(biharmonic_kernel(3), t, res) - 1.0), ktol);
    }
    // The t^1 numerator does not give a Poisson kernel: its mass is t^{-2}.
    for (double t : {0.5, 2.0})
      C.add("biharmonic_t1_mass_minus_t^-2_t=" + fmt(t),
            std::abs(normalization_check(biharmonic_kernel(1), t, res) - 1.0 / (t * t)), ktol);
  });
  const double gtol = cfg.tolerance("gap", 1e-3);
  const Vec zero3 = {0.0, 0.0, 0.0};
  const ScalarField u01 = halfspace_solution({zero3, 1.0, 0.0});
  const Density g = [u01](std::span<const double> y) {
    const double X[4] = {y[0], y[1], y[2], 0.0};
    return u01(X);
  };
  C.stage("reproduction", [&] {
    const double X[4] = {0.0, 0.0, 0.0, 1.0};
    C.add("biharmonic_reproduction_(0,1)", std::abs(apply_kernel(biharmonic_kernel(3), g, zero3, 1.0) - u01(X)), gtol);
    C.add("harmonic_reproduces_constant",
          std::abs(apply_kernel(harmonic_kernel(), [](std::span<const double>) { return 1.0; }, zero3, 1.0) - 1.0), ktol);
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double t : {0.2, 0.1, 0.05}) {
      const double gap = std::abs(apply_kernel(biharmonic_kernel(3), g, zero3, t) - g(zero3));
      monotone = monotone && gap < prev;
      prev = gap;
    }
    C.flag("boundary_limit_monotone", monotone, true);
  });
  const Density f01 = extremal_boundary_density(zero3, 1.0);
  const LogKernelOptions o01 = extremal_log_options(zero3, 1.0);
  C.stage("lemma31", [&] {
    const std::size_t m = static_cast<std::size_t>(cfg.samples);
    auto interior = halfspace_points(3, static_cast<int>(m), 1.0, 0.4, 1.5);
    std::vector<Vec> boundary;
    for (const Vec& X : halfspace_points(3, static_cast<int>(m), 1.5, 0.0, 1.0)) boundary.push_back({X[0], X[1], X[2], 0.0});
    const SystemResidual r = lemma31_system_check(f01, interior, boundary, stencil(cfg), o01);
    C.add("lemma31_interior_bilaplacian", r.interior_sup, gtol);
    C.add("lemma31_dt_laplacian_minus_4f", r.boundary("neumann_laplacian"), gtol);
    C.add("lemma31_dt_v", r.boundary("neumann"), gtol);
    const double X[4] = {0.0, 0.0, 0.0, 1.0};
    const ScalarField v = log_kernel_field(f01, o01);
    C.add("lemma31_laplacian_identity_(0,1)", std::abs(laplacian(v, X, stencil(cfg)) - laplacian_representation(f01, X)),
          gtol);
  });
  C.stage("corollary", [&] {
    const auto targets = corollary_targets(cfg.seed, 20);
    const CorollaryReport rep = corollary_selfconsistency(cfg.a, cfg.lambda, targets, {50.0, 0.0, 0.0, 0.0},
                                                          extremal_log_options(cfg.a, cfg.lambda), stencil(cfg));
    C.add("corollary_worst_gap", rep.worst_gap, gtol);
    C.add("corollary_boundary_fixed_point_gap_c0=0", rep.fixed_point_gap, gtol);
    C.add("corollary_gap_after_constant_offset", rep.offset_gap, gtol);
    C.add("corollary_far_gap_after_offset_|X|=50", rep.far_gap, cfg.tolerance("far", 1e-2));
    C.add("laplacian_representation_C1_spread", rep.c1.spread, gtol);
  });
  C.stage("quadratic_fit", [&] {
    const LogKernelIntegrator v(extremal_boundary_density(cfg.a, cfg.lambda), extremal_log_options(cfg.a, cfg.lambda));
    const ScalarField u = halfspace_solution({cfg.a, cfg.lambda, 0.0});
    const auto grid = halfspace_points(3, 60, 2.0, 0.0, 2.0);
    const auto diff = parallel_map(grid.size(), [&](std::size_t i) { return u(grid[i]) - v(grid[i]); });
    const QuadraticFit q = quadratic_fit(grid, diff);
    C.add("fit_c_star", std::abs(q.c_star), gtol);
    double amax = 0.0, bmax = 0.0;
    for (double x : q.a_coeffs) amax = std::max(amax, std::abs(x));
    for (double x : q.b_coeffs) bmax = std::max(bmax, std::abs(x));
    C.add("fit_a_max", amax, gtol);
    C.add("fit_b_max", bmax, gtol);
    C.add("fit_c0", std::abs(q.c0), gtol);
    C.add("fit_residual", q.fit_residual, gtol);
  });
}

void spectral_compare(const RunConfig& cfg, Campaign& C) {
  const int n = cfg.dim;
  const double tol = cfg.tolerance("oracle", 1e-8);
  const auto pts = ball_points(n, cfg.samples, 1.0);
  C.stage("oracle", [&] {
    if (n >= 3) {
      const OracleComparison b = compare_closed_form(cfg.z0, n, cfg.kmax, pts, tol);
      C.add("biharmonic_sup_gap", b.sup_gap, tol);
      C.add("biharmonic_neumann_defect", b.max_neumann_defect, tol);
      C.add("tail_bound", b.tail_bound, tol);
    }
    const OracleComparison h = compare_harmonic(cfg.z0, n, cfg.kmax, pts, tol);
    C.add("harmonic_sup_gap", h.sup_gap, tol);
  });
  C.stage("decay", [&] {
    const double z = norm(cfg.z0);
    if (z == 0.0) return;
    const ZonalExpansion e = zonal_project(boundary_extremal(n >= 3 ? 4 : 2, n, cfg.z0), axis_of(cfg.z0), cfg.kmax);
    const double w = norm(omega_from_z(cfg.z0));
    C.add("decay_ratio_vs_|omega0|", std::abs(decay_ratio(e, 2, 12) / w - 1.0), cfg.tolerance("decay", 0.2));
  });
}

void energy_identity_campaign(const RunConfig& cfg, Campaign& C) {
  const int n = cfg.dim;
  const ScalarField v = cfg.family == "constant" ? constant_field(Chart::Ball, n, 1.0)
                                                 : biharmonic_extension(n, omega_from_z(cfg.z0));
  EnergyRules er;
  er.halfspace_res = cfg.res_radial;
  er.halfspace_res_check = std::max(4, 2 * cfg.res_radial / 3);
  const Rules rules = ball_rules(cfg);
  er.sphere = rules.sphere;
  er.ball = rules.ball;
  er.cfg = stencil(cfg);
  er.cfg.richardson_levels = 1;
  C.stage("identity", [&] {
    const EnergyIdentity e = energy_identity(v, n, er);
    C.add("relative_gap", e.relative_gap, cfg.tolerance("energy", 1e-4));
    C.add("halfspace_stability", std::abs(e.left - e.left_check) / std::max(1.0, std::abs(e.left)), er.stability_tol);
  });
}

void el_check(const RunConfig& cfg, Campaign& C) {
  const StencilConfig sc = stencil(cfg, third_order_stencil());
  const ScalarField v = biharmonic_extension(3, omega_from_z(cfg.z0));
  const auto boundary = sphere_points(3, cfg.samples, cfg.seed);
  const QuadRule sphere = sphere_rule(3, cfg.res_sphere, cfg.res_inner);
  const double tol = cfg.tolerance("el", 1e-4);
  C.stage("euler_lagrange", [&] {
    const double r0 = euler_lagrange_s3_residual(v, boundary, sphere, sc);
    const double r1 = euler_lagrange_s3_residual(shifted(v, 1.0), boundary, sphere, sc);
    C.add("el_residual", r0, tol);
    C.add("el_residual_shift_+1", r1, tol);
    C.add("shift_invariance", std::abs(r1 - r0), cfg.tolerance("shift", 1e-8));
  });
}

struct Poly {
  const char* name;
  double (*w)(std::span<const double>);
};

// Biharmonic polynomials on R^4 through degree 4.
const Poly kBiharmonicBasis[] = {
    {"1", [](std::span<const double>) { return 1.0; }},
    {"x1", [](std::span<const double> X) { return X[0]; }},
    {"x2x3", [](std::span<const double> X) { return X[1] * X[2]; }},
    {"x1^2-x4^2", [](std::span<const double> X) { return X[0] * X[0] - X[3] * X[3]; }},
    {"|X|^2", [](std::span<const double> X) { return norm_sq(X); }},
    {"x1x2x3", [](std::span<const double> X) { return X[0] * X[1] * X[2]; }},
    {"|X|^2x1", [](std::span<const double> X) { return norm_sq(X) * X[0]; }},
    {"x1^3-3x1x2^2", [](std::span<const double> X) { return X[0] * X[0] * X[0] - 3.0 * X[0] * X[1] * X[1]; }},
    {"x1x2x3x4", [](std::span<const double> X) { return X[0] * X[1] * X[2] * X[3]; }},
    {"|X|^2x1x2", [](std::span<const double> X) { return norm_sq(X) * X[0] * X[1]; }},
    {"|X|^2(x3^2-x4^2)", [](std::span<const double> X) { return norm_sq(X) * (X[2] * X[2] - X[3] * X[3]); }},
    {"x1^4-6x1^2x2^2+x2^4",
     [](std::span<const double> X) {
       const double a = X[0] * X[0], b = X[1] * X[1];
       return a * a - 6.0 * a * b + b * b;
     }},
};

void pizzetti(const RunConfig& cfg, Campaign& C) {
  const StencilConfig sc = stencil(cfg, polynomial_stencil());
  const QuadRule sphere = sphere_rule(3, cfg.res_sphere);
  Rng rng(cfg.seed);
  std::vector<std::pair<Vec, double>> centres;
  for (int i = 0; i < cfg.samples; ++i) {
    Vec X0 = rng.in_ball(4, 1.0);
    centres.push_back({X0, rng.uniform(0.2, 1.0)});
  }
  C.stage("biharmonic_basis", [&] {
    double worst = 0.0;
    for (const Poly& p : kBiharmonicBasis) {
      const ScalarField w = make_field(Chart::Ball, 3, p.w, p.name);
      for (const auto& [X0, r] : centres) worst = std::max(worst, pizzetti_gap(w, X0, r, sphere, sc));
    }
    C.add("max_gap_biharmonic_basis", worst, cfg.tolerance("pizzetti", 1e-9));
  });
  C.stage("quartic_control", [&] {
    // Delta^2 |X|^4 = 192 on R^4, so the two-term formula misses exactly r^4.
    const ScalarField w = make_field(Chart::Ball, 3, [](std::span<const double> X) { return norm_sq(X) * norm_sq(X); },
                                     "|X|^4");
    double min_gap = std::numeric_limits<double>::infinity(), rel = 0.0;
    for (const auto& [X0, r] : centres) {
      const double gap = pizzetti_gap(w, X0, r, sphere, sc);
      min_gap = std::min(min_gap, gap);
      rel = std::max(rel, std::abs(gap / std::pow(r, 4) - 1.0));
    }
    C.add("quartic_min_gap", min_gap, 1e-3, Relation::AtLeast);
    C.add("quartic_gap_vs_r^4", rel, 1e-6);
  });
}

using CampaignFn = void (*)(const RunConfig&, Campaign&);

const std::vector<std::pair<std::string, CampaignFn>>& table() {
  static const std::vector<std::pair<std::string, CampaignFn>> t = {
      {"verify-extremal", verify_extremal},   {"deficit-scan", deficit_scan},
      {"residual-halfspace", residual_halfspace}, {"kernel-check", kernel_check},
      {"spectral-compare", spectral_compare}, {"energy-identity", energy_identity_campaign},
      {"el-check", el_check},                 {"pizzetti", pizzetti},
  };
  return t;
}

void set_default(int& x, int d) {
  if (x <= 0) x = d;
}

}  // namespace

double RunConfig::tolerance(const std::string& key, double fallback) const {
  const auto it = tol.find(key);
  return it == tol.end() ? fallback : it->second;
}

Check make_check(std::string name, double value, double tolerance, Relation rel) {
  bool pass = false;
  if (std::isfinite(value)) {
    switch (rel) {
      case Relation::AtMost: pass = value <= tolerance; break;
      case Relation::AtLeast: pass = value >= tolerance; break;
      case Relation::Equals: pass = value == tolerance; break;
    }
  }
  return {std::move(name), value, tolerance, pass};
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = [] {
    std::vector<std::string> out;
    for (const auto& kv : table()) out.push_back(kv.first);
    return out;
  }();
  return c;
}

RunConfig resolve(RunConfig cfg) {
  const std::string& cmd = cfg.command;
  if (std::find(commands().begin(), commands().end(), cmd) == commands().end())
    throw UsageError("unknown command '" + cmd + "'");
  if (cfg.order != 2 && cfg.order != 4) throw UsageError("--order must be 2 or 4");
  const bool ball_cmd = cmd == "verify-extremal" || cmd == "deficit-scan" || cmd == "spectral-compare" ||
                        cmd == "energy-identity" || cmd == "el-check";
  if (cmd == "el-check") cfg.dim = 3, cfg.order = 4;
  if (cmd == "energy-identity") {
    cfg.order = 4;
    if (cfg.dim <= 3) throw UsageError("energy-identity needs --dim > 3");
  }
  if (ball_cmd) {
    if (cfg.dim < 1) throw UsageError("--dim must be >= 1");
    if (cfg.order == 4 && cfg.dim < 3)
      throw UsageError("--order 4 needs --dim >= 3 (the fourth-order inequalities start at n = 3)");
    if (cfg.z0.empty()) {
      cfg.z0.assign(static_cast<std::size_t>(cfg.dim) + 1, 0.0);
      cfg.z0[0] = cmd == "energy-identity" ? 0.2 : 0.3;
    }
    if (static_cast<int>(cfg.z0.size()) != cfg.dim + 1)
      throw UsageError("--z0 must have dim + 1 = " + std::to_string(cfg.dim + 1) + " components");
    if (!(norm(cfg.z0) < 1.0)) throw UsageError("--z0 must lie inside the unit ball");
  }
  if (cmd == "residual-halfspace" || cmd == "kernel-check") {
    if (cfg.a.empty()) cfg.a = {0.0, 0.0, 0.0};
    if (cfg.a.size() != 3) throw UsageError("--a must have 3 components (the half-space problem lives on R^4_+)");
    if (!(cfg.lambda > 0.0)) throw UsageError("--lambda must be > 0");
    if (cfg.family != "extremal" && cfg.family != "cubic")
      throw UsageError("--family must be extremal or cubic for " + cmd);
  }
  if (cmd == "energy-identity" && cfg.family != "extremal" && cfg.family != "constant")
    throw UsageError("--family must be extremal or constant for energy-identity");
  if (cfg.kmax < 1) throw UsageError("--kmax must be >= 1");
  if (cfg.fd_h < 0.0) throw UsageError("--fd-h must be > 0");
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
  for (const auto& [k, v] : cfg.tol)
    if (!(v >= 0.0)) throw UsageError("--tol-" + k + " must be >= 0");

  if (cmd == "verify-extremal" || cmd == "deficit-scan") {
    set_default(cfg.res_sphere, 48);
    set_default(cfg.res_radial, 64);
    set_default(cfg.samples, 24);
    set_default(cfg.trials, 100);
  } else if (cmd == "energy-identity") {
    set_default(cfg.res_sphere, 24);
    set_default(cfg.res_radial, 12);
  } else if (cmd == "el-check") {
    set_default(cfg.res_sphere, 48);
    set_default(cfg.samples, 16);
  } else if (cmd == "pizzetti") {
    set_default(cfg.res_sphere, 8);
    set_default(cfg.samples, 20);
  } else if (cmd == "kernel-check") {
    set_default(cfg.res_radial, 48);
    set_default(cfg.samples, 3);
  } else if (cmd == "spectral-compare") {
    set_default(cfg.samples, 200);
  } else {
    set_default(cfg.samples, 24);
  }
  if (cfg.res_inner < 0) cfg.res_inner = (cfg.z0.empty() || along_e1(cfg.z0)) ? 1 : cfg.res_sphere;
  if (cfg.res_inner == 0) cfg.res_inner = cfg.res_sphere;
  return cfg;
}

namespace {

std::vector<std::pair<std::string, std::string>> echo(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> e = {
      {"command", c.command}, {"order", std::to_string(c.order)}, {"dim", std::to_string(c.dim)},
      {"z0", fmt_vec(c.z0)},  {"a", fmt_vec(c.a)},                 {"lambda", fmt(c.lambda)},
      {"c", fmt(c.c)},        {"family", c.family},                {"kmax", std::to_string(c.kmax)},
      {"trials", std::to_string(c.trials)}, {"modes", std::to_string(c.modes)}, {"eps", fmt(c.eps)},
      {"samples", std::to_string(c.samples)}, {"seed", std::to_string(c.seed)},
      {"res_sphere", std::to_string(c.res_sphere)}, {"res_radial", std::to_string(c.res_radial)},
      {"res_inner", std::to_string(c.res_inner)}, {"fd_h", fmt(c.fd_h > 0.0 ? c.fd_h : StencilConfig{}.h)},
  };
  for (const auto& [k, v] : c.tol) e.push_back({"tol-" + k, fmt(v)});
  if (!c.config_file.empty()) e.push_back({"config", c.config_file});
  return e;
}

}  // namespace

Report run(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.config = echo(cfg);
  Campaign C;
  for (const auto& [name, fn] : table())
    if (name == cfg.command) fn(cfg, C);
  r.checks = C.take();
  r.pass = !r.checks.empty();
  for (const Check& c : r.checks) r.pass = r.pass && c.pass;
  if (cfg.timing)
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string to_json(const Report& r) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json conf = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.config) conf[k] = v;
  j["config"] = conf;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const Check& c : r.checks) {
    nlohmann::ordered_json x;
    x["name"] = c.name;
    x["value"] = std::isfinite(c.value) ? nlohmann::ordered_json(c.value) : nlohmann::ordered_json(nullptr);
    x["tolerance"] = std::isfinite(c.tolerance) ? nlohmann::ordered_json(c.tolerance) : nlohmann::ordered_json(nullptr);
    x["pass"] = c.pass;
    checks.push_back(x);
  }
  j["checks"] = checks;
  j["pass"] = r.pass;
  j["elapsed_ms"] = r.elapsed_ms;
  return j.dump(2) + "\n";
}

std::string to_csv(const Report& r) {
  std::string s = "name,value,tolerance,pass\n";
  for (const Check& c : r.checks)
    s += "\"" + c.name + "\"," + fmt(c.value) + "," + fmt(c.tolerance) + "," + (c.pass ? "true" : "false") + "\n";
  return s;
}

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of sharp trace inequalities and their extremals"};
  app.set_config("--config", "", "flat key = value file; keys are the long flag names")->check(CLI::ExistingFile);
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string z0, a;
  std::map<std::string, double> tol;
  const std::vector<std::string> tol_keys = {"residual", "deficit", "nonnegativity", "exact", "exact_lap", "volume",
                                             "kernel",   "gap",     "far",           "oracle", "decay",     "energy",
                                             "el",       "shift",   "pizzetti"};
  app.add_option("--order", cfg.order, "2 or 4");
  app.add_option("--dim", cfg.dim, "n, the boundary sphere is S^n");
  app.add_option("--z0", z0, "concentration point in B^{n+1}, comma-separated");
  app.add_option("--a", a, "half-space centre in R^3, comma-separated");
  app.add_option("--lambda", cfg.lambda, "half-space scale");
  app.add_option("--c", cfg.c, "coefficient of t^2");
  app.add_option("--family", cfg.family, "extremal | cubic | constant");
  app.add_option("--kmax", cfg.kmax, "spectral truncation degree");
  app.add_option("--trials", cfg.trials, "perturbations for deficit-scan");
  app.add_option("--modes", cfg.modes, "perturbation degree for deficit-scan");
  app.add_option("--eps", cfg.eps, "perturbation amplitude for deficit-scan");
  app.add_option("--samples", cfg.samples, "sample points per set");
  app.add_option("--seed", cfg.seed, "seed for all random sampling");
  app.add_option("--res-sphere", cfg.res_sphere, "sphere rule resolution");
  app.add_option("--res-radial", cfg.res_radial, "radial / compactified resolution");
  app.add_option("--res-inner", cfg.res_inner, "inner sphere resolution (1: zonal reduction, 0: res-sphere)");
  app.add_option("--fd-h", cfg.fd_h, "finite-difference step");
  for (const auto& k : tol_keys) {
    app.add_option_function<double>(
        "--tol-" + k, [&tol, k](double v) { tol[k] = v; }, "tolerance override");
  }
  app.add_option("--out", cfg.out, "report path (default stdout)");
  app.add_option("--format", cfg.format, "json | csv");
  app.add_flag("--timing", cfg.timing, "record wall time in elapsed_ms (off keeps reports byte-identical)");
  const std::map<std::string, std::string> blurb = {
      {"verify-extremal", "ball system residuals and zero deficit of the closed-form extremal"},
      {"deficit-scan", "deficit at the extremal and under random Gegenbauer perturbations"},
      {"residual-halfspace", "half-space system residuals, exact values and volumes"},
      {"kernel-check", "Poisson kernels, log-kernel representation and the quadratic fit"},
      {"spectral-compare", "closed forms against the Gegenbauer series"},
      {"energy-identity", "half-space energy against the ball-side terms"},
      {"el-check", "Euler-Lagrange residual on S^3 and its shift invariance"},
      {"pizzetti", "sphere-average expansion for biharmonic polynomials"}};
  for (const auto& name : commands()) app.add_subcommand(name, blurb.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!z0.empty()) cfg.z0 = parse_vec(z0, "z0");
    if (!a.empty()) cfg.a = parse_vec(a, "a");
    cfg.tol = tol;
    if (auto* c = app.get_option("--config"); c->count() > 0) cfg.config_file = c->as<std::string>();
    cfg = resolve(cfg);
    const Report r = run(cfg);
    const std::string text = cfg.format == "csv" ? to_csv(r) : to_json(r);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream os(cfg.out, std::ios::binary);
      if (!os) throw UsageError("cannot write " + cfg.out);
      os << text;
    }
    return r.pass ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace sobtrace::cli
