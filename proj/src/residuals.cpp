#include "sobtrace/residuals.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sobtrace/errors.hpp"
#include "sobtrace/parallel.hpp"

namespace sobtrace {

namespace {

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double SystemResidual::boundary(const std::string& name) const {
  for (const auto& [k, v] : boundary_sups)
    if (k == name) return v;
  throw DomainError("SystemResidual: no boundary entry '" + name + "'");
}

double SystemResidual::max_boundary() const {
  double m = 0.0;
  for (const auto& kv : boundary_sups) m = std::max(m, kv.second);
  return m;
}

double SystemResidual::worst() const { return std::max(interior_sup, max_boundary()); }

SystemResidual ball_system_residual(const ScalarField& v, const ScalarField& f, double beta,
                                    const std::vector<Vec>& interior, const std::vector<Vec>& boundary,
                                    const StencilConfig& cfg) {
  if (v.chart() != Chart::Ball) throw DomainError("ball_system_residual: v must be a ball field");
  SystemResidual r;
  r.interior_samples = interior.size();
  r.boundary_samples = boundary.size();
  r.interior_sup = max_of(parallel_map(interior.size(), [&](std::size_t i) { return bilaplacian(v, interior[i], cfg); }));
  const auto neu = parallel_map(boundary.size(), [&](std::size_t i) {
    return boundary_normal(v, boundary[i], NormalKind::EtaV, cfg) - beta * f(boundary[i]);
  });
  const auto dir = parallel_map(boundary.size(), [&](std::size_t i) { return v(boundary[i]) - f(boundary[i]); });
  r.boundary_sups = {{"neumann", max_of(neu)}, {"dirichlet", max_of(dir)}};
  return r;
}

SystemResidual halfspace_system_residual(const ScalarField& u, Nonlinearity kind, double c,
                                         const std::vector<Vec>& interior, const std::vector<Vec>& boundary,
                                         const StencilConfig& cfg) {
  if (u.chart() != Chart::HalfSpace) throw DomainError("halfspace_system_residual: u must be a half-space field");
  const int n = u.n();
  if (kind == Nonlinearity::Exp3 && n != 3) throw DomainError("halfspace_system_residual: exp3 needs n = 3");
  if (kind == Nonlinearity::Power && n <= 3) throw DomainError("halfspace_system_residual: power needs n > 3");
  const double p = kind == Nonlinearity::Power ? (n + 3.0) / (n - 3.0) : 0.0;
  SystemResidual r;
  r.interior_samples = interior.size();
  r.boundary_samples = boundary.size();
  r.interior_sup = max_of(parallel_map(interior.size(), [&](std::size_t i) { return bilaplacian(u, interior[i], cfg); }));
  const auto nl = parallel_map(boundary.size(), [&](std::size_t i) {
    const double val = u(boundary[i]);
    const double rhs = kind == Nonlinearity::Exp3 ? 4.0 * std::exp(3.0 * val) : c * std::pow(val, p);
    return boundary_normal(u, boundary[i], NormalKind::DtDeltaU, cfg) - rhs;
  });
  const auto neu = parallel_map(boundary.size(), [&](std::size_t i) {
    return boundary_normal(u, boundary[i], NormalKind::DtU, cfg);
  });
  r.boundary_sups = {{"nonlinear", max_of(nl)}, {"neumann", max_of(neu)}};
  return r;
}

double euler_lagrange_s3_residual(const ScalarField& v, const std::vector<Vec>& boundary, const QuadRule& sphere,
                                  const StencilConfig& cfg, double precondition_tol) {
  if (v.chart() != Chart::Ball || v.n() != 3) throw DomainError("euler_lagrange_s3_residual: v must live on B^4");
  if (sphere.domain != Domain::Sphere || sphere.dim != 4) throw DomainError("euler_lagrange_s3_residual: need an S^3 rule");
  const auto bil = parallel_map(boundary.size(), [&](std::size_t i) { return bilaplacian(v, scaled(boundary[i], 0.5), cfg); });
  if (max_of(bil) > precondition_tol) {
    std::ostringstream os;
    os << "precondition failed: Delta^2 v = 0 in B^4 (max |Delta^2 v| = " << max_of(bil) << ")";
    throw PreconditionError(os.str());
  }
  const auto eta = parallel_map(boundary.size(), [&](std::size_t i) {
    return boundary_normal(v, boundary[i], NormalKind::EtaV, cfg);
  });
  if (max_of(eta) > precondition_tol) {
    std::ostringstream os;
    os << "precondition failed: eta v = 0 on S^3 (max |eta v| = " << max_of(eta) << ")";
    throw PreconditionError(os.str());
  }
  const double log_mass = integrate_log_exp(sphere, [&](std::span<const double> xi) { return 3.0 * v(xi); });
  const double eight_pi2 = 8.0 * std::numbers::pi * std::numbers::pi;
  const auto res = parallel_map(boundary.size(), [&](std::size_t i) {
    const Vec& xi = boundary[i];
    const double lhs = -boundary_normal(v, xi, NormalKind::EtaDeltaV, cfg) - 2.0 * tangential_laplacian(v, xi, cfg) + 4.0;
    const double rhs = eight_pi2 * std::exp(3.0 * v(xi) - log_mass);
    return lhs - rhs;
  });
  return max_of(res);
}

double pizzetti_gap(const ScalarField& w, std::span<const double> X0, double r, const QuadRule& sphere,
                    const StencilConfig& cfg) {
  const int N = static_cast<int>(X0.size());
  const double mean = sphere_average(w, X0, r, sphere);
  const double left = r * r / (2.0 * N) * laplacian(w, X0, cfg);
  return std::abs(left - (mean - w(X0)));
}

QuadraticFit quadratic_fit(const std::vector<Vec>& grid, const std::vector<double>& diff) {
  if (grid.empty() || grid.size() != diff.size()) throw DomainError("quadratic_fit: grid/values mismatch");
  const int d = static_cast<int>(grid.front().size());
  const int n = d - 1;
  const int cols = 2 * n + 2;
  const int rows = static_cast<int>(grid.size());
  if (rows < cols) throw RankDeficiencyError("quadratic_fit: fewer samples than unknowns");
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd y(rows);
  for (int i = 0; i < rows; ++i) {
    const Vec& X = grid[i];
    A(i, 0) = X[n] * X[n];
    for (int k = 0; k < n; ++k) {
      A(i, 1 + k) = X[k] * X[k];
      A(i, 1 + n + k) = X[k];
    }
    A(i, cols - 1) = 1.0;
    y(i) = diff[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) {
    std::ostringstream os;
    os << "quadratic_fit: design matrix has rank " << qr.rank() << " < " << cols;
    throw RankDeficiencyError(os.str());
  }
  const Eigen::VectorXd c = qr.solve(y);
  QuadraticFit f;
  f.c_star = c(0);
  double c0 = c(cols - 1);
  for (int k = 0; k < n; ++k) {
    const double a = c(1 + k), b = c(1 + n + k);
    f.a_coeffs.push_back(a);
    f.b_coeffs.push_back(b);
    const double x0 = std::abs(a) > 1e-12 ? -b / (2.0 * a) : 0.0;
    f.x0.push_back(x0);
    c0 -= a * x0 * x0;
  }
  f.c0 = c0;
  f.fit_residual = std::sqrt((A * c - y).squaredNorm() / rows);
  return f;
}

QuadraticFit quadratic_difference_fit(const ScalarField& u, const ScalarField& v, const std::vector<Vec>& grid) {
  const auto diff = parallel_map(grid.size(), [&](std::size_t i) { return u(grid[i]) - v(grid[i]); });
  return quadratic_fit(grid, diff);
}

LowerBoundCheck log_lower_bound_check(const ScalarField& v, double alpha, const std::vector<Vec>& rays,
                                      double r_short, double r_long, int radii_per_decade) {
  const double r_min = 4.0;
  const int steps = static_cast<int>(std::ceil(std::log10(r_long / r_min) * radii_per_decade));
  std::vector<Vec> pts;
  std::vector<double> radii;
  for (const auto& ray : rays) {
    const double s = 1.0 / norm(ray);
    for (int k = 0; k <= steps; ++k) {
      const double r = r_min * std::pow(r_long / r_min, static_cast<double>(k) / steps);
      pts.push_back(scaled(ray, r * s));
      radii.push_back(r);
    }
  }
  const auto g = parallel_map(pts.size(), [&](std::size_t i) { return -alpha * std::log(radii[i]) - v(pts[i]); });
  LowerBoundCheck out;
  out.c_hat_short = -std::numeric_limits<double>::infinity();
  out.c_hat_long = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (radii[i] <= r_short * (1.0 + 1e-12)) out.c_hat_short = std::max(out.c_hat_short, g[i]);
    out.c_hat_long = std::max(out.c_hat_long, g[i]);
  }
  out.bounded = std::isfinite(out.c_hat_long) &&
                out.c_hat_long <= out.c_hat_short + 0.1 * std::max(1.0, std::abs(out.c_hat_short));
  return out;
}

}  // namespace sobtrace
