#include "sobtrace/functionals.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sobtrace/closed_forms.hpp"
#include "sobtrace/errors.hpp"
#include "sobtrace/sampling.hpp"

namespace sobtrace {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kPreconditionSeed = 0x5eed;

void require_rules(const DeficitRules& r, int n) {
  if (r.sphere.domain != Domain::Sphere || r.sphere.dim != n + 1)
    throw DomainError("deficit: sphere rule must live on S^n");
  if (r.ball.domain != Domain::Ball || r.ball.dim != n + 1) throw DomainError("deficit: ball rule must live on B^{n+1}");
}

double sphere_power_integral(const QuadRule& rule, const ScalarField& f, double p) {
  return integrate(rule, [&](std::span<const double> xi) { return std::pow(std::abs(f(xi)), p); });
}

double sphere_integral(const QuadRule& rule, const ScalarField& f) {
  return integrate(rule, [&](std::span<const double> xi) { return f(xi); });
}

double sphere_gradient_energy(const QuadRule& rule, const ScalarField& f, const StencilConfig& cfg) {
  const ScalarField g = homogeneous_extension(f);
  return integrate(rule, [&](std::span<const double> xi) { return norm_sq(gradient(g, xi, cfg)); });
}

double ball_dirichlet_energy(const QuadRule& rule, const ScalarField& v, const StencilConfig& cfg) {
  return integrate(rule, [&](std::span<const double> x) { return norm_sq(gradient(v, x, cfg)); });
}

double ball_laplacian_energy(const QuadRule& rule, const ScalarField& v, const StencilConfig& cfg) {
  return integrate(rule, [&](std::span<const double> x) {
    const double l = laplacian(v, x, cfg);
    return l * l;
  });
}

}  // namespace

InequalityConstants constants(int n) {
  if (n < 1) throw DomainError("constants: n must be >= 1");
  InequalityConstants c;
  c.n = n;
  const double area = sphere_area(n);
  c.b_n = 0.5 * (n + 1) * (n - 3);
  c.a_n = n > 3 ? 2.0 * std::tgamma(0.5 * (n + 3)) / std::tgamma(0.5 * (n - 3)) * std::pow(area, 3.0 / n)
                : std::numeric_limits<double>::quiet_NaN();
  c.sharp2 = n > 1 ? std::tgamma(0.5 * (n + 1)) / std::tgamma(0.5 * (n - 1)) * std::pow(area, 1.0 / n)
                   : std::numeric_limits<double>::quiet_NaN();
  return c;
}

void check_boundary_conditions(const ScalarField& f, const ScalarField& v, std::optional<double> beta,
                               const StencilConfig& cfg, double dirichlet_tol, double neumann_tol) {
  const std::vector<Vec> pts = sphere_points(v.n(), 32, kPreconditionSeed);
  double worst_d = 0.0, worst_n = 0.0;
  for (const auto& xi : pts) {
    const double fv = f(xi);
    worst_d = std::max(worst_d, std::abs(v(xi) - fv));
    if (beta) worst_n = std::max(worst_n, std::abs(boundary_normal(v, xi, NormalKind::EtaV, cfg) - *beta * fv));
  }
  if (worst_d > dirichlet_tol) {
    std::ostringstream os;
    os << "precondition failed: Dirichlet condition v = f on S^n (max |v - f| = " << worst_d << ")";
    throw PreconditionError(os.str());
  }
  if (beta && worst_n > neumann_tol) {
    std::ostringstream os;
    os << "precondition failed: Neumann condition eta v = " << *beta << " f on S^n (max defect = " << worst_n << ")";
    throw PreconditionError(os.str());
  }
}

DeficitReport deficit(int order, int n, const ScalarField& f, const ScalarField& v, const DeficitRules& rules) {
  if (order != 2 && order != 4) throw DomainError("deficit: order must be 2 or 4");
  if (n < 1 || (order == 4 && n < 3)) throw DomainError("deficit: unsupported (order, n)");
  if (f.n() != n || v.n() != n) throw DomainError("deficit: field dimension mismatch");
  require_rules(rules, n);
  if (rules.check_preconditions) {
    std::optional<double> beta;
    if (order == 4) beta = n == 3 ? 0.0 : -0.5 * (n - 3);
    check_boundary_conditions(f, v, beta, rules.cfg);
  }
  const InequalityConstants k = constants(n);
  DeficitReport r;
  r.sphere_meta = rules.sphere.meta;
  r.ball_meta = rules.ball.meta;
  r.sphere_nodes = rules.sphere.size();
  r.ball_nodes = rules.ball.size();

  if (order == 2 && n == 1) {
    r.lhs = integrate_log_exp(rules.sphere, [&](std::span<const double> xi) { return f(xi); }) - std::log(2.0 * kPi);
    r.rhs = ball_dirichlet_energy(rules.ball, v, rules.cfg) / (4.0 * kPi) + sphere_integral(rules.sphere, f) / (2.0 * kPi);
  } else if (order == 2) {
    const double p = 2.0 * n / (n - 1.0);
    r.lhs = k.sharp2 * std::pow(sphere_power_integral(rules.sphere, f, p), (n - 1.0) / n);
    r.rhs = ball_dirichlet_energy(rules.ball, v, rules.cfg) + 0.5 * (n - 1) * sphere_power_integral(rules.sphere, f, 2.0);
  } else if (n == 3) {
    const double pi2 = kPi * kPi;
    r.lhs = integrate_log_exp(rules.sphere, [&](std::span<const double> xi) { return 3.0 * f(xi); }) -
            std::log(2.0 * pi2);
    r.rhs = 3.0 / (16.0 * pi2) * ball_laplacian_energy(rules.ball, v, rules.cfg) +
            3.0 / (8.0 * pi2) * sphere_gradient_energy(rules.sphere, f, rules.cfg) +
            3.0 / (2.0 * pi2) * sphere_integral(rules.sphere, f);
  } else {
    const double p = 2.0 * n / (n - 3.0);
    r.lhs = k.a_n * std::pow(sphere_power_integral(rules.sphere, f, p), (n - 3.0) / n);
    r.rhs = ball_laplacian_energy(rules.ball, v, rules.cfg) + 2.0 * sphere_gradient_energy(rules.sphere, f, rules.cfg) +
            k.b_n * sphere_power_integral(rules.sphere, f, 2.0);
  }
  r.deficit = r.rhs - r.lhs;
  return r;
}

EnergyIdentity energy_identity(const ScalarField& v, int n, const EnergyRules& rules) {
  if (n <= 3) throw DomainError("energy_identity: n must be > 3");
  if (v.chart() != Chart::Ball || v.n() != n) throw DomainError("energy_identity: v must be a ball field on B^{n+1}");
  const ScalarField U = transfer_field(v, TransferMode::WeightPower);
  auto halfspace_energy = [&](int res) {
    const QuadRule q = compactified_rule(Domain::HalfSpace, n + 1, res);
    return integrate(q, [&](std::span<const double> X) {
      const double l = laplacian(U, X, rules.cfg);
      return l * l;
    });
  };
  EnergyIdentity e;
  const int res_check = rules.halfspace_res_check > 0 ? rules.halfspace_res_check : (2 * rules.halfspace_res) / 3;
  e.left_check = halfspace_energy(res_check);
  e.left = halfspace_energy(rules.halfspace_res);
  if (std::abs(e.left - e.left_check) > rules.stability_tol * std::abs(e.left)) {
    std::ostringstream os;
    os << "energy_identity: half-space integral unstable (" << e.left << " at res " << rules.halfspace_res << ", "
       << e.left_check << " at res " << res_check << ")";
    throw ConvergenceError(os.str());
  }
  const InequalityConstants k = constants(n);
  e.ball_term = ball_laplacian_energy(rules.ball, v, rules.cfg);
  e.gradient_term = 2.0 * sphere_gradient_energy(rules.sphere, v, rules.cfg);
  e.mass_term = k.b_n * sphere_power_integral(rules.sphere, v, 2.0);
  e.right = e.ball_term + e.gradient_term + e.mass_term;
  e.gap = std::abs(e.left - e.right);
  e.relative_gap = e.gap / std::max(std::abs(e.left), std::abs(e.right));
  return e;
}

double energy_identity_gap(const ScalarField& v, int n, const EnergyRules& rules) { return energy_identity(v, n, rules).gap; }

VolumeReport volumes_and_alpha(const ScalarField& u, const VolumeRules& rules) {
  if (u.chart() != Chart::HalfSpace) throw DomainError("volumes_and_alpha: u must be a half-space field");
  const int n = u.n();
  auto safe = [](auto&& fn) {
    try {
      return fn();
    } catch (const SingularPointError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  auto boundary = [&](int res) {
    return safe([&] {
      const QuadRule q = compactified_rule(Domain::Euclidean, n, res);
      return integrate(q, [&](std::span<const double> x) {
        Vec X(x.begin(), x.end());
        X.push_back(0.0);
        return std::exp(3.0 * u.eval_raw(X));
      });
    });
  };
  auto interior = [&](int res) {
    return safe([&] {
      const QuadRule q = compactified_rule(Domain::HalfSpace, n + 1, res);
      return integrate(q, [&](std::span<const double> X) { return std::exp(4.0 * u.eval_raw(X)); });
    });
  };
  auto divergent = [&](double coarse, double fine) {
    if (!std::isfinite(coarse) || !std::isfinite(fine)) return true;
    return std::abs(fine - coarse) > rules.growth_tol * std::abs(coarse);
  };
  VolumeReport r;
  r.boundary_volume = boundary(rules.boundary_res);
  r.boundary_volume_fine = boundary(2 * rules.boundary_res);
  r.interior_volume = interior(rules.interior_res);
  r.interior_volume_fine = interior(2 * rules.interior_res);
  r.boundary_divergent = divergent(r.boundary_volume, r.boundary_volume_fine);
  r.interior_divergent = divergent(r.interior_volume, r.interior_volume_fine);
  r.alpha = 2.0 * r.boundary_volume / sphere_area(3);
  return r;
}

}  // namespace sobtrace
