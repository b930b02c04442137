#pragma once

// Moebius transfer between the upper half-space R^{n+1}_+ and the unit ball B^{n+1}.
//
// The map X -> 2(X + e)/|X + e|^2 - e (e = e_{n+1}) is an involution, so the same
// formula sends the closed half-space into the closed ball and back. The boundary
// R^n x {0} lands on the unit sphere; the point -e is the image of infinity.

#include <optional>
#include <span>

#include "sobtrace/vec.hpp"

namespace sobtrace {

enum class Chart { Ball, HalfSpace };

const char* to_string(Chart c);

/// A point of one chart. coords has length n+1; for HalfSpace the last entry is t >= 0.
struct ChartPoint {
  Chart chart;
  Vec coords;

  int n() const { return static_cast<int>(coords.size()) - 1; }
  double t() const { return coords.back(); }
};

/// Validating constructors; they throw DomainError when the chart invariant fails.
ChartPoint ball_point(Vec coords);
ChartPoint halfspace_point(Vec coords);

/// Raw involution on spans (out may alias in). Returns false at the pole X = -e.
bool mobius_apply(std::span<const double> in, std::span<double> out);

ChartPoint mobius_to_ball(const ChartPoint& X);
ChartPoint mobius_to_halfspace(const ChartPoint& xi);  // PolePointError at -e_{n+1}

/// 2/|X + e|^2; the pullback of |d xi|^2 under the map is this factor squared times |dX|^2.
double conformal_factor(std::span<const double> X);
double conformal_factor(const ChartPoint& X);

/// omega0 = z0/|z0|^2 (1 - sqrt(1 - |z0|^2)), evaluated as z0/(1 + sqrt(1 - |z0|^2)).
Vec omega_from_z(std::span<const double> z0);
/// z0 = 2 omega0/(1 + |omega0|^2).
Vec z_from_omega(std::span<const double> omega0);

/// |omega|^2 |xi|^2 - 2 omega.xi + 1, the continuous extension of |xi/|xi| - |xi| omega|^2.
double F_squared(std::span<const double> xi, std::span<const double> omega);

/// lambda/(|x-a|^2 + |t+lambda|^2) - (1-|omega|^2)/4 |xi+e|^2 / F(xi,omega)^2
/// with xi = S(X), omega = S(a, lambda). Vanishes identically.
double identity_residual(std::span<const double> a, double lambda, const ChartPoint& X);

struct HalfSpaceCenter {
  Vec a;
  double lambda;
};

/// Ball-side center z0, its omega0 and (optionally) the half-space parameters with S(a,lambda) = omega0.
struct CenterParams {
  Vec z0;
  Vec omega0;
  std::optional<HalfSpaceCenter> halfspace;

  static CenterParams from_z0(std::span<const double> z0);
  static CenterParams from_omega(std::span<const double> omega0);
  static CenterParams from_halfspace(std::span<const double> a, double lambda);
};

}  // namespace sobtrace
