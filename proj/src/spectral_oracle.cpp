#include "sobtrace/spectral_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sobtrace/chart_geometry.hpp"
#include "sobtrace/closed_forms.hpp"
#include "sobtrace/errors.hpp"
#include "sobtrace/quadrature.hpp"
#include "sobtrace/sampling.hpp"

namespace sobtrace {

namespace {

double mass(double mu) {
  if (mu == 0.0) return std::numbers::pi;
  return std::sqrt(std::numbers::pi) * std::tgamma(mu + 0.5) / std::tgamma(mu + 1.0);
}

double recurrence_b(int k, double mu) {
  if (mu == 0.0 && k == 1) return std::sqrt(0.5);
  return std::sqrt(k * (k + 2.0 * mu - 1.0) / (4.0 * (k + mu) * (k + mu - 1.0)));
}

Vec unit_axis(std::span<const double> axis) {
  const double r = norm(axis);
  if (!(r > 0.0)) throw DomainError("zonal: axis must be non-zero");
  return scaled(axis, 1.0 / r);
}

// A unit vector orthogonal to the (unit) axis.
Vec orthogonal_to(const Vec& axis) {
  std::size_t j = 0;
  for (std::size_t i = 1; i < axis.size(); ++i)
    if (std::abs(axis[i]) < std::abs(axis[j])) j = i;
  Vec p(axis.size(), 0.0);
  p[j] = 1.0;
  const double c = dot(p, axis);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= c * axis[i];
  return scaled(p, 1.0 / norm(p));
}

Rule1D projection_rule(int res, double mu) {
  if (mu > 0.0) return gauss_gegenbauer_1d(res, mu);
  Rule1D r;  // Gauss-Chebyshev (first kind)
  for (int j = 0; j < res; ++j) {
    r.x.push_back(std::cos(std::numbers::pi * (res - j - 0.5) / res));
    r.w.push_back(std::numbers::pi / res);
  }
  return r;
}

void check_zonal(const ScalarField& f, const Vec& axis) {
  const int d = static_cast<int>(axis.size());
  Rng rng(0x2077);
  std::vector<Vec> perps;
  if (d == 2) {
    const Vec p = orthogonal_to(axis);
    perps = {p, scaled(p, -1.0)};
  } else {
    for (int k = 0; k < 6; ++k) {
      Vec q = rng.unit_vector(d);
      const double c = dot(q, axis);
      for (int i = 0; i < d; ++i) q[i] -= c * axis[i];
      perps.push_back(scaled(q, 1.0 / norm(q)));
    }
  }
  for (double s : {-0.7, -0.2, 0.3, 0.8}) {
    const double c = std::sqrt(1.0 - s * s);
    double lo = 1e300, hi = -1e300;
    for (const auto& q : perps) {
      Vec xi(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) xi[i] = s * axis[i] + c * q[i];
      const double v = f(xi);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > 1e-8) {
      std::ostringstream os;
      os << "zonal_project: field '" << f.label() << "' varies by " << hi - lo << " on the latitude s = " << s;
      throw NonZonalError(os.str());
    }
  }
}

}  // namespace

double gegenbauer_eval(int k, double lambda_g, double s) {
  if (k < 0) throw DomainError("gegenbauer_eval: k must be >= 0");
  if (lambda_g < 0.0) throw DomainError("gegenbauer_eval: index must be >= 0");
  if (k == 0) return 1.0;
  if (lambda_g == 0.0) {
    double t0 = 1.0, t1 = s;
    for (int j = 1; j < k; ++j) {
      const double t2 = 2.0 * s * t1 - t0;
      t0 = t1;
      t1 = t2;
    }
    return t1;
  }
  double c0 = 1.0, c1 = 2.0 * lambda_g * s;
  for (int j = 1; j < k; ++j) {
    const double c2 = (2.0 * (j + lambda_g) * s * c1 - (j + 2.0 * lambda_g - 1.0) * c0) / (j + 1.0);
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

void gegenbauer_orthonormal_d(int kmax, double mu, double s, std::vector<double>& p, std::vector<double>& dp) {
  if (mu < 0.0) throw DomainError("gegenbauer_orthonormal: index must be >= 0");
  p.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
  dp.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
  p[0] = 1.0 / std::sqrt(mass(mu));
  for (int k = 0; k < kmax; ++k) {
    const double bk = k > 0 ? recurrence_b(k, mu) : 0.0;
    const double bn = recurrence_b(k + 1, mu);
    const double pm = k > 0 ? p[k - 1] : 0.0;
    const double dpm = k > 0 ? dp[k - 1] : 0.0;
    p[k + 1] = (s * p[k] - bk * pm) / bn;
    dp[k + 1] = (p[k] + s * dp[k] - bk * dpm) / bn;
  }
}

std::vector<double> gegenbauer_orthonormal(int kmax, double mu, double s) {
  std::vector<double> p, dp;
  gegenbauer_orthonormal_d(kmax, mu, s, p, dp);
  return p;
}

ZonalExpansion zonal_project(const ScalarField& f, std::span<const double> axis_in, int kmax, int res) {
  if (kmax < 0) throw DomainError("zonal_project: kmax must be >= 0");
  if (static_cast<int>(axis_in.size()) != f.dim()) throw DomainError("zonal_project: axis dimension mismatch");
  const Vec axis = unit_axis(axis_in);
  check_zonal(f, axis);
  const int n = f.n();
  const double mu = 0.5 * (n - 1);
  if (res <= 0) res = 2 * kmax + 20;
  const Rule1D rule = projection_rule(res, mu);
  const Vec perp = orthogonal_to(axis);
  ZonalExpansion e;
  e.axis = axis;
  e.n = n;
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(kmax) + 1);
  Vec xi(axis.size());
  for (std::size_t j = 0; j < rule.x.size(); ++j) {
    const double s = rule.x[j];
    const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = s * axis[i] + c * perp[i];
    const double fv = f(xi);
    const std::vector<double> p = gegenbauer_orthonormal(kmax, mu, s);
    for (int k = 0; k <= kmax; ++k) acc[k].add(rule.w[j] * fv * p[k]);
  }
  for (const auto& a : acc) e.coeffs.push_back(a.value());
  return e;
}

double zonal_eval(const ZonalExpansion& e, std::span<const double> xi) {
  const int kmax = static_cast<int>(e.coeffs.size()) - 1;
  const std::vector<double> p = gegenbauer_orthonormal(kmax, 0.5 * (e.n - 1), dot(e.axis, xi) / norm(xi));
  double s = 0.0;
  for (int k = 0; k <= kmax; ++k) s += e.coeffs[k] * p[k];
  return s;
}

std::vector<ModeSolution> solve_modes(const ZonalExpansion& e, double beta) {
  std::vector<ModeSolution> out;
  for (std::size_t k = 0; k < e.coeffs.size(); ++k) {
    const double f = e.coeffs[k];
    const int kk = static_cast<int>(k);
    out.push_back({kk, 0.5 * (kk + 2 - beta) * f, 0.5 * (beta - kk) * f});
  }
  return out;
}

std::vector<ModeSolution> harmonic_modes(const ZonalExpansion& e) {
  std::vector<ModeSolution> out;
  for (std::size_t k = 0; k < e.coeffs.size(); ++k) out.push_back({static_cast<int>(k), e.coeffs[k], 0.0});
  return out;
}

namespace {

struct Polar {
  double r;
  double s;
};

Polar polar(std::span<const double> axis, std::span<const double> xi) {
  const double r = norm(xi);
  return {r, r > 0.0 ? std::clamp(dot(axis, xi) / r, -1.0, 1.0) : 0.0};
}

int kmax_of(const std::vector<ModeSolution>& modes) {
  int k = 0;
  for (const auto& m : modes) k = std::max(k, m.k);
  return k;
}

}  // namespace

double reconstruct_value(const std::vector<ModeSolution>& modes, std::span<const double> axis, int n,
                         std::span<const double> xi) {
  const Polar q = polar(axis, xi);
  const std::vector<double> p = gegenbauer_orthonormal(kmax_of(modes), 0.5 * (n - 1), q.s);
  double s = 0.0;
  for (const auto& m : modes) {
    const double rk = std::pow(q.r, m.k);
    s += (m.a + m.b * q.r * q.r) * rk * p[m.k];
  }
  return s;
}

double reconstruct_radial_derivative(const std::vector<ModeSolution>& modes, std::span<const double> axis, int n,
                                     std::span<const double> xi) {
  const Polar q = polar(axis, xi);
  const std::vector<double> p = gegenbauer_orthonormal(kmax_of(modes), 0.5 * (n - 1), q.s);
  double s = 0.0;
  for (const auto& m : modes) {
    const double lead = m.k > 0 ? m.k * m.a * std::pow(q.r, m.k - 1) : 0.0;
    s += (lead + (m.k + 2) * m.b * std::pow(q.r, m.k + 1)) * p[m.k];
  }
  return s;
}

double reconstruct_laplacian(const std::vector<ModeSolution>& modes, std::span<const double> axis, int n,
                             std::span<const double> xi) {
  const Polar q = polar(axis, xi);
  const std::vector<double> p = gegenbauer_orthonormal(kmax_of(modes), 0.5 * (n - 1), q.s);
  double s = 0.0;
  for (const auto& m : modes) s += 2.0 * (2 * m.k + n + 1) * m.b * std::pow(q.r, m.k) * p[m.k];
  return s;
}

ScalarField reconstruct(const std::vector<ModeSolution>& modes, std::span<const double> axis_in, int n,
                        double margin) {
  const Vec axis = unit_axis(axis_in);
  if (static_cast<int>(axis.size()) != n + 1) throw DomainError("reconstruct: axis dimension must be n+1");
  auto eval = [modes, axis, n](std::span<const double> xi) { return reconstruct_value(modes, axis, n, xi); };
  FieldDomain d;
  d.margin = margin;
  return ScalarField(Chart::Ball, n, std::move(eval), "v[spectral]", d);
}

namespace {

OracleComparison compare(std::span<const double> z0, int n, int kmax, const std::vector<Vec>& samples, double tol,
                         bool biharmonic) {
  if (static_cast<int>(z0.size()) != n + 1) throw DomainError("compare_closed_form: z0 must have n+1 components");
  const double zr = norm(z0);
  const Vec axis = zr > 0.0 ? scaled(z0, 1.0 / zr) : unit_vector(n + 1, 0);
  const ScalarField f = boundary_extremal(biharmonic ? 4 : 2, n, z0);
  const ZonalExpansion e = zonal_project(f, axis, kmax);
  const double beta = biharmonic ? (n == 3 ? 0.0 : -0.5 * (n - 3)) : 0.0;
  const std::vector<ModeSolution> modes = biharmonic ? solve_modes(e, beta) : harmonic_modes(e);
  const Vec omega = omega_from_z(z0);
  const ScalarField closed = biharmonic ? biharmonic_extension(n, omega) : harmonic_extension(n, omega);

  OracleComparison out;
  for (const auto& x : samples) out.sup_gap = std::max(out.sup_gap, std::abs(reconstruct_value(modes, axis, n, x) - closed(x)));
  out.tail_bound = std::pow(zr, kmax + 1) / (1.0 - zr);
  out.truncation_warning = out.tail_bound > tol;
  if (biharmonic) {
    for (const auto& x : samples) {
      const double r = norm(x);
      if (r == 0.0) continue;
      const Vec xi = scaled(x, 1.0 / r);
      const double defect = reconstruct_radial_derivative(modes, axis, n, xi) - beta * f(xi);
      out.max_neumann_defect = std::max(out.max_neumann_defect, std::abs(defect));
    }
  }
  return out;
}

}  // namespace

OracleComparison compare_closed_form(std::span<const double> z0, int n, int kmax, const std::vector<Vec>& samples,
                                     double tolerance) {
  if (n < 3) throw DomainError("compare_closed_form: n must be >= 3");
  return compare(z0, n, kmax, samples, tolerance, true);
}

OracleComparison compare_harmonic(std::span<const double> z0, int n, int kmax, const std::vector<Vec>& samples,
                                  double tolerance) {
  if (n < 1) throw DomainError("compare_harmonic: n must be >= 1");
  return compare(z0, n, kmax, samples, tolerance, false);
}

double decay_ratio(const ZonalExpansion& e, int k0, int k1) {
  if (k0 < 0 || k1 <= k0 || k1 >= static_cast<int>(e.coeffs.size())) throw DomainError("decay_ratio: bad range");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int k = k0; k <= k1; ++k) {
    const double y = std::log(std::abs(e.coeffs[k]));
    sx += k;
    sy += y;
    sxx += static_cast<double>(k) * k;
    sxy += k * y;
    ++m;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return std::exp(slope);
}

}  // namespace sobtrace
