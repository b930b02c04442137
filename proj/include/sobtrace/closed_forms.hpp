#pragma once

// Explicit extremal families on the ball and the half-space, and the transfer of fields
// between the two charts.

#include <span>

#include "sobtrace/field.hpp"

namespace sobtrace {

/// Boundary extremal on S^n (evaluated at the given point, which should lie on S^n):
///   order 2, n = 1 / order 4, n = 3:  -log|1 - <z0, xi>|
///   order 2, n > 1:                    |1 - <z0, xi>|^{(1-n)/2}
///   order 4, n > 3:                    |1 - <z0, xi>|^{(3-n)/2}
ScalarField boundary_extremal(int order, int n, std::span<const double> z0);

/// Harmonic extension of boundary_extremal(2, n, z0) with omega0 = omega_from_z(z0).
/// n = 1: -log F^2 + log(1 + |omega0|^2); n > 1: (1 + |omega0|^2)^{(n-1)/2} F^{1-n}.
ScalarField harmonic_extension(int n, std::span<const double> omega0);

/// Biharmonic extension with eta v = 0 (n = 3) or eta v = -(n-3)/2 v (n > 3).
ScalarField biharmonic_extension(int n, std::span<const double> omega0);

struct HalfSpaceExtremalParams {
  Vec a;              // in R^n
  double lambda = 1.0;
  double c = 0.0;     // coefficient of t^2
};

/// u_{a,lambda}(x,t) + c t^2 with
/// u_{a,lambda} = log(2 lambda/q) + 2 t lambda/q,  q = (lambda + t)^2 + |x - a|^2.
ScalarField halfspace_solution(const HalfSpaceExtremalParams& p);

/// scale (lambda/q)^{(n-3)/2} [1 + (n-3) t lambda/q] on R^{n+1}_+, n > 3.
ScalarField sun_solution(std::span<const double> a, double lambda, double scale, int n);

enum class TransferMode { WeightPower, AdditiveLog };

/// Ball -> half-space or half-space -> ball, depending on the field's chart.
///   WeightPower (n > 3): U(X) = v(S X) (2/|X + e|^2)^{(n-3)/2}, and the same formula back.
///   AdditiveLog (n = 3): w = v o S + (1 - |S X|^2)/2 + log(2/|X + e|^2),
///                        v = w o S - (1 - |xi|^2)/2 + log(2/|xi + e|^2).
/// Ball-side results record -e_{n+1} as a singular point.
ScalarField transfer_field(const ScalarField& field, TransferMode mode);

/// Constant / polynomial helpers used across tests and campaigns.
ScalarField constant_field(Chart chart, int n, double value);
/// Sum f + g (same chart), scaled: alpha f + beta g + kappa.
ScalarField affine_combination(const ScalarField& f, double alpha, const ScalarField& g, double beta,
                               double kappa = 0.0);
ScalarField shifted(const ScalarField& f, double kappa);
ScalarField scaled(const ScalarField& f, double alpha);

}  // namespace sobtrace
