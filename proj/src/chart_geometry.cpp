#include "sobtrace/chart_geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sobtrace/errors.hpp"

namespace sobtrace {

const char* to_string(Chart c) { return c == Chart::Ball ? "ball" : "halfspace"; }

ChartPoint ball_point(Vec coords) {
  if (coords.size() < 2) throw DomainError("ball point needs n+1 >= 2 coordinates");
  if (norm(coords) > 1.0 + 4.0 * std::numeric_limits<double>::epsilon())
    throw DomainError("ball point outside the closed unit ball");
  return {Chart::Ball, std::move(coords)};
}

ChartPoint halfspace_point(Vec coords) {
  if (coords.size() < 2) throw DomainError("half-space point needs n+1 >= 2 coordinates");
  if (coords.back() < 0.0) throw DomainError("half-space point with t < 0");
  return {Chart::HalfSpace, std::move(coords)};
}

bool mobius_apply(std::span<const double> in, std::span<double> out) {
  const std::size_t d = in.size();
  double q = 0.0;
  for (std::size_t i = 0; i + 1 < d; ++i) q += in[i] * in[i];
  const double last = in[d - 1] + 1.0;
  q += last * last;
  if (q == 0.0) return false;
  const double s = 2.0 / q;
  for (std::size_t i = 0; i + 1 < d; ++i) out[i] = s * in[i];
  out[d - 1] = s * last - 1.0;
  return true;
}

ChartPoint mobius_to_ball(const ChartPoint& X) {
  if (X.chart != Chart::HalfSpace) throw DomainError("mobius_to_ball expects a half-space point");
  if (X.t() < 0.0) throw DomainError("mobius_to_ball: t < 0");
  Vec xi(X.coords.size());
  mobius_apply(X.coords, xi);  // |X + e| >= 1 on the closed half-space
  return {Chart::Ball, std::move(xi)};
}

ChartPoint mobius_to_halfspace(const ChartPoint& xi) {
  if (xi.chart != Chart::Ball) throw DomainError("mobius_to_halfspace expects a ball point");
  Vec X(xi.coords.size());
  if (!mobius_apply(xi.coords, X)) throw PolePointError("mobius_to_halfspace: xi = -e_{n+1} maps to infinity");
  // Rounding can leave -1e-17 in t for boundary points.
  if (X.back() < 0.0 && X.back() > -1e-12) X.back() = 0.0;
  return {Chart::HalfSpace, std::move(X)};
}

double conformal_factor(std::span<const double> X) {
  double q = 0.0;
  for (std::size_t i = 0; i + 1 < X.size(); ++i) q += X[i] * X[i];
  const double last = X.back() + 1.0;
  q += last * last;
  return 2.0 / q;
}

double conformal_factor(const ChartPoint& X) { return conformal_factor(std::span<const double>(X.coords)); }

Vec omega_from_z(std::span<const double> z0) {
  const double r2 = norm_sq(z0);
  if (!(r2 < 1.0)) throw DomainError("omega_from_z: |z0| must be < 1");
  return scaled(z0, 1.0 / (1.0 + std::sqrt(1.0 - r2)));
}

Vec z_from_omega(std::span<const double> omega0) {
  const double r2 = norm_sq(omega0);
  if (!(r2 < 1.0)) throw DomainError("z_from_omega: |omega0| must be < 1");
  return scaled(omega0, 2.0 / (1.0 + r2));
}

double F_squared(std::span<const double> xi, std::span<const double> omega) {
  return norm_sq(omega) * norm_sq(xi) - 2.0 * dot(omega, xi) + 1.0;
}

double identity_residual(std::span<const double> a, double lambda, const ChartPoint& X) {
  if (!(lambda > 0.0)) throw DomainError("identity_residual: lambda must be > 0");
  const int n = X.n();
  if (static_cast<int>(a.size()) != n) throw DomainError("identity_residual: dim(a) != n");
  Vec center(a.begin(), a.end());
  center.push_back(lambda);
  Vec omega(n + 1), xi(n + 1);
  mobius_apply(center, omega);
  mobius_apply(X.coords, xi);

  double q = 0.0;
  for (int i = 0; i < n; ++i) q += (X.coords[i] - a[i]) * (X.coords[i] - a[i]);
  q += (X.t() + lambda) * (X.t() + lambda);
  const double lhs = lambda / q;

  Vec xi_e = xi;
  xi_e.back() += 1.0;
  const double rhs = 0.25 * (1.0 - norm_sq(omega)) * norm_sq(xi_e) / F_squared(xi, omega);
  return lhs - rhs;
}

CenterParams CenterParams::from_z0(std::span<const double> z0) {
  CenterParams p;
  p.z0.assign(z0.begin(), z0.end());
  p.omega0 = omega_from_z(z0);
  Vec X(p.omega0.size());
  mobius_apply(p.omega0, X);
  p.halfspace = HalfSpaceCenter{Vec(X.begin(), X.end() - 1), X.back()};
  return p;
}

CenterParams CenterParams::from_omega(std::span<const double> omega0) {
  return from_z0(z_from_omega(omega0));
}

CenterParams CenterParams::from_halfspace(std::span<const double> a, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("CenterParams: lambda must be > 0");
  Vec X(a.begin(), a.end());
  X.push_back(lambda);
  Vec omega(X.size());
  mobius_apply(X, omega);
  CenterParams p;
  p.omega0 = omega;
  p.z0 = z_from_omega(omega);
  p.halfspace = HalfSpaceCenter{Vec(a.begin(), a.end()), lambda};
  return p;
}

}  // namespace sobtrace
