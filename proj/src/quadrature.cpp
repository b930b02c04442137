#include "sobtrace/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sobtrace {

namespace {

constexpr double kPi = std::numbers::pi;

struct Directions {
  int dim = 0;
  Vec nodes;
  Vec weights;
};

// S^n in R^{n+1}, polar axis e_1.
Directions sphere_directions(int n, int res_polar, int res_inner) {
  Directions d;
  d.dim = n + 1;
  if (n == 0) {
    d.nodes = {-1.0, 1.0};
    d.weights = {1.0, 1.0};
    return d;
  }
  if (n == 1) {
    const int m = 2 * res_polar;
    for (int k = 0; k < m; ++k) {
      const double phi = 2.0 * kPi * (k + 0.5) / m;
      d.nodes.push_back(std::cos(phi));
      d.nodes.push_back(std::sin(phi));
      d.weights.push_back(2.0 * kPi / m);
    }
    return d;
  }
  const Rule1D polar = gauss_gegenbauer_1d(res_polar, 0.5 * (n - 1));
  const Directions inner = sphere_directions(n - 1, res_inner, res_inner);
  const std::size_t ni = inner.weights.size();
  for (std::size_t j = 0; j < polar.x.size(); ++j) {
    const double s = polar.x[j];
    const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
    for (std::size_t k = 0; k < ni; ++k) {
      d.nodes.push_back(s);
      for (int q = 0; q < n; ++q) d.nodes.push_back(c * inner.nodes[k * n + q]);
      d.weights.push_back(polar.w[j] * inner.weights[k]);
    }
  }
  return d;
}

// Upper hemisphere {sigma_d >= 0} of S^{d-1}, polar angle measured from e_d.
Directions hemisphere_directions(int d, int res) {
  Directions h;
  h.dim = d;
  const Rule1D theta = gauss_legendre_1d(res, 0.0, 0.5 * kPi);
  const Directions inner = sphere_directions(d - 2, res, res);
  const std::size_t ni = inner.weights.size();
  for (std::size_t j = 0; j < theta.x.size(); ++j) {
    const double st = std::sin(theta.x[j]);
    const double ct = std::cos(theta.x[j]);
    const double jac = std::pow(st, d - 2);
    for (std::size_t k = 0; k < ni; ++k) {
      for (int q = 0; q < d - 1; ++q) h.nodes.push_back(st * inner.nodes[k * (d - 1) + q]);
      h.nodes.push_back(ct);
      h.weights.push_back(theta.w[j] * jac * inner.weights[k]);
    }
  }
  return h;
}

}  // namespace

const char* to_string(Domain d) {
  switch (d) {
    case Domain::Interval: return "interval";
    case Domain::Sphere: return "sphere";
    case Domain::Ball: return "ball";
    case Domain::Euclidean: return "euclidean";
    case Domain::HalfSpace: return "halfspace";
  }
  return "?";
}

double QuadRule::total_weight() const {
  CompensatedSum base;
  for (double w : base_weights) base.add(w);
  if (!is_product()) return base.value();
  CompensatedSum rad;
  for (double w : radial_weights) rad.add(w);
  return base.value() * rad.value();
}

QuadRule QuadRule::recentered(Vec c) const {
  QuadRule r = *this;
  r.center = std::move(c);
  return r;
}

namespace detail {
void throw_singular_node(std::size_t index) {
  std::ostringstream os;
  os << "integrand is singular or non-finite at quadrature node " << index;
  throw SingularPointError(os.str());
}
}  // namespace detail

Rule1D gauss_legendre_1d(int m, double a, double b) {
  if (m < 1) throw DomainError("gauss_legendre: m must be >= 1");
  Rule1D r;
  r.x.resize(m);
  r.w.resize(m);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = m * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-16) break;
    }
    if (m % 2 == 1 && i == m / 2) z = 0.0;
    // Recompute the derivative at the converged node.
    double p1 = 1.0, p2 = 0.0;
    for (int j = 1; j <= m; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    pp = m * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    r.x[i] = mid - half * z;
    r.x[m - 1 - i] = mid + half * z;
    r.w[i] = r.w[m - 1 - i] = half * w;
  }
  return r;
}

Rule1D gauss_gegenbauer_1d(int m, double mu) {
  if (m < 1) throw DomainError("gauss_gegenbauer: m must be >= 1");
  if (!(mu > 0.0)) throw DomainError("gauss_gegenbauer: mu must be > 0");
  // Orthonormal recurrence s p_k = b_{k+1} p_{k+1} + b_k p_{k-1}.
  Vec b(static_cast<std::size_t>(m) + 1, 0.0);
  for (int k = 1; k <= m; ++k) b[k] = std::sqrt(k * (k + 2.0 * mu - 1.0) / (4.0 * (k + mu) * (k + mu - 1.0)));
  const double mass = std::sqrt(kPi) * std::tgamma(mu + 0.5) / std::tgamma(mu + 1.0);

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  for (int k = 1; k < m; ++k) sub[k - 1] = b[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  Rule1D r;
  r.x.resize(m);
  r.w.resize(m);
  for (int i = 0; i < m; ++i) {
    double s = es.eigenvalues()[i];
    double christoffel = 0.0;
    for (int it = 0; it < 4; ++it) {
      double pm1 = 0.0, p = 1.0 / std::sqrt(mass);
      double dpm1 = 0.0, dp = 0.0;
      double sum = p * p;
      for (int k = 0; k < m; ++k) {
        const double bk = k > 0 ? b[k] : 0.0;
        const double pn = (s * p - bk * pm1) / b[k + 1];
        const double dpn = (p + s * dp - bk * dpm1) / b[k + 1];
        pm1 = p;
        p = pn;
        dpm1 = dp;
        dp = dpn;
        if (k + 1 < m) sum += p * p;
      }
      christoffel = sum;
      if (dp != 0.0) s -= p / dp;
    }
    r.x[i] = s;
    r.w[i] = 1.0 / christoffel;
  }
  // Enforce exact symmetry of the even weight.
  for (int i = 0; i < m / 2; ++i) {
    const double xs = 0.5 * (r.x[m - 1 - i] - r.x[i]);
    const double ws = 0.5 * (r.w[i] + r.w[m - 1 - i]);
    r.x[i] = -xs;
    r.x[m - 1 - i] = xs;
    r.w[i] = r.w[m - 1 - i] = ws;
  }
  if (m % 2 == 1) r.x[m / 2] = 0.0;
  return r;
}

QuadRule gauss_legendre(int m) {
  const Rule1D g = gauss_legendre_1d(m);
  QuadRule q;
  q.domain = Domain::Interval;
  q.dim = 1;
  q.base_nodes = g.x;
  q.base_weights = g.w;
  q.meta.res_radial = m;
  return q;
}

QuadRule gauss_gegenbauer(int m, double mu) {
  const Rule1D g = gauss_gegenbauer_1d(m, mu);
  QuadRule q;
  q.domain = Domain::Interval;
  q.dim = 1;
  q.base_nodes = g.x;
  q.base_weights = g.w;
  q.meta.res_radial = m;
  return q;
}

QuadRule sphere_rule(int n, int res) { return sphere_rule(n, res, res); }

QuadRule sphere_rule(int n, int res_polar, int res_inner) {
  if (n < 0) throw DomainError("sphere_rule: n must be >= 0");
  if (res_polar < 1 || res_inner < 1) throw DomainError("sphere_rule: resolution must be >= 1");
  Directions d = sphere_directions(n, res_polar, res_inner);
  QuadRule q;
  q.domain = Domain::Sphere;
  q.dim = n + 1;
  q.base_nodes = std::move(d.nodes);
  q.base_weights = std::move(d.weights);
  q.meta.res_polar = res_polar;
  q.meta.res_inner = res_inner;
  return q;
}

QuadRule ball_rule(int n, int res_r, int res_s) { return ball_rule(n, res_r, res_s, res_s); }

QuadRule ball_rule(int n, int res_r, int res_s, int res_inner) {
  if (res_r < 1) throw DomainError("ball_rule: radial resolution must be >= 1");
  QuadRule q = sphere_rule(n, res_s, res_inner);
  q.domain = Domain::Ball;
  const Rule1D g = gauss_legendre_1d(res_r, 0.0, 1.0);
  q.radii = g.x;
  q.radial_weights.resize(g.x.size());
  for (std::size_t i = 0; i < g.x.size(); ++i) q.radial_weights[i] = g.w[i] * std::pow(g.x[i], n);
  q.meta.res_radial = res_r;
  return q;
}

QuadRule compactified_rule(Domain domain, int ambient_dim, int res, double scale, int res_angular, Vec center) {
  if (res < 1) throw DomainError("compactified_rule: res must be >= 1");
  if (!(scale > 0.0)) throw DomainError("compactified_rule: scale must be > 0");
  const int d = ambient_dim;
  const int ra = res_angular > 0 ? res_angular : res;
  Directions dirs;
  if (domain == Domain::Euclidean) {
    if (d < 1) throw DomainError("compactified_rule: dimension must be >= 1");
    dirs = sphere_directions(d - 1, ra, ra);
  } else if (domain == Domain::HalfSpace) {
    if (d < 2) throw DomainError("compactified_rule: half-space dimension must be >= 2");
    dirs = hemisphere_directions(d, ra);
  } else {
    throw DomainError("compactified_rule: domain must be Euclidean or HalfSpace");
  }
  QuadRule q;
  q.domain = domain;
  q.dim = d;
  q.base_nodes = std::move(dirs.nodes);
  q.base_weights = std::move(dirs.weights);
  const Rule1D g = gauss_legendre_1d(res, 0.0, 0.5 * kPi);
  q.radii.resize(g.x.size());
  q.radial_weights.resize(g.x.size());
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double c = std::cos(g.x[i]);
    const double r = scale * std::tan(g.x[i]);
    q.radii[i] = r;
    q.radial_weights[i] = g.w[i] * scale / (c * c) * std::pow(r, d - 1);
  }
  q.center = std::move(center);
  q.meta.res_radial = res;
  q.meta.res_polar = ra;
  q.meta.res_inner = ra;
  q.meta.scale = scale;
  return q;
}

RadialRule radial_dyadic(double rho, int levels, int q, int dim) {
  RadialRule out;
  auto add = [&](double a, double b) {
    const Rule1D g = gauss_legendre_1d(q, a, b);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      out.r.push_back(g.x[i]);
      out.w.push_back(g.w[i] * std::pow(g.x[i], dim - 1));
    }
  };
  double lo = rho * std::ldexp(1.0, -levels);
  add(0.0, lo);
  for (int k = levels - 1; k >= 0; --k) {
    const double hi = rho * std::ldexp(1.0, -k);
    add(lo, hi);
    lo = hi;
  }
  return out;
}

RadialRule radial_tail(double rho, int m, int dim) {
  RadialRule out;
  const Rule1D g = gauss_legendre_1d(m, 0.0, 0.5 * kPi);
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double c = std::cos(g.x[i]);
    const double r = rho * (1.0 + std::tan(g.x[i]));
    out.r.push_back(r);
    out.w.push_back(g.w[i] * rho / (c * c) * std::pow(r, dim - 1));
  }
  return out;
}

RadialRule concat(RadialRule a, const RadialRule& b) {
  a.r.insert(a.r.end(), b.r.begin(), b.r.end());
  a.w.insert(a.w.end(), b.w.begin(), b.w.end());
  return a;
}

QuadRule spherical_product(const RadialRule& radial, const QuadRule& directions, Vec center, Domain domain) {
  if (directions.is_product()) throw DomainError("spherical_product: directions must be an explicit sphere rule");
  QuadRule q;
  q.domain = domain;
  q.dim = directions.dim;
  q.base_nodes = directions.base_nodes;
  q.base_weights = directions.base_weights;
  q.radii = radial.r;
  q.radial_weights = radial.w;
  q.center = std::move(center);
  q.meta = directions.meta;
  q.meta.res_radial = static_cast<int>(radial.r.size());
  return q;
}

// ---------------------------------------------------------------------------------------

LogKernelIntegrator::LogKernelIntegrator(Density f, LogKernelOptions opts) : f_(std::move(f)), opts_(std::move(opts)) {
  if (opts_.density_center.size() != 3) throw DomainError("LogKernelIntegrator: density center must be in R^3");
  if (!(opts_.split_radius > 0.0)) throw DomainError("LogKernelIntegrator: split radius must be > 0");
  directions_ = sphere_rule(2, opts_.angular_res);
  radial_ = concat(radial_dyadic(opts_.split_radius, opts_.dyadic_levels, opts_.dyadic_nodes, 3),
                   radial_tail(opts_.split_radius, opts_.tail_nodes, 3));
  near_rule_ = spherical_product(radial_, directions_, {}, Domain::Euclidean);
  far_rule_ = compactified_rule(Domain::Euclidean, 3, opts_.far_res, opts_.density_scale, 0, opts_.density_center);
  const double origin[4] = {0.0, 0.0, 0.0, 0.0};
  c0_ = shifted_log_integral(origin);
}

double LogKernelIntegrator::shifted_log_integral(std::span<const double> target) const {
  if (target.size() != 4) throw DomainError("log kernel: target must be (x, t) in R^3 x R");
  const double x0 = target[0], x1 = target[1], x2 = target[2];
  const double t2 = target[3] * target[3];
  const double d = std::sqrt(dist_sq(target.first(3), opts_.density_center));
  if (d <= opts_.far_switch * opts_.density_scale) {
    return integrate(near_rule_, [&](std::span<const double> z) {
      const double r2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
      const double y[3] = {x0 + z[0], x1 + z[1], x2 + z[2]};
      return f_(y) * std::log(r2 + t2);
    });
  }
  return integrate(far_rule_, [&](std::span<const double> y) {
    const double r2 = (y[0] - x0) * (y[0] - x0) + (y[1] - x1) * (y[1] - x1) + (y[2] - x2) * (y[2] - x2);
    return f_(y) * std::log(r2 + t2);
  });
}

double LogKernelIntegrator::operator()(std::span<const double> target) const {
  return (c0_ - shifted_log_integral(target)) / sphere_area(3);
}

LogKernelOptions refined(const LogKernelOptions& o) {
  LogKernelOptions r = o;
  r.dyadic_levels += 4;
  r.dyadic_nodes += 4;
  r.tail_nodes *= 2;
  r.angular_res *= 2;
  r.far_res *= 2;
  return r;
}

double log_kernel_integrate(const Density& f, std::span<const double> target, const LogKernelOptions& opts) {
  const double coarse = LogKernelIntegrator(f, opts)(target);
  if (!opts.check_refinement) return coarse;
  const double fine = LogKernelIntegrator(f, refined(opts))(target);
  if (std::abs(fine - coarse) > opts.refinement_tol * std::max(1.0, std::abs(fine))) {
    std::ostringstream os;
    os << "log_kernel_integrate: coarse/fine disagree (" << coarse << " vs " << fine << ")";
    throw ConvergenceError(os.str());
  }
  return fine;
}

}  // namespace sobtrace
