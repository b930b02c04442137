#pragma once

// Zonal (Gegenbauer) solver for the harmonic Dirichlet problem and the biharmonic problem
// v = f, eta v = beta f on the unit ball B^{n+1}.
//
// Boundary data zonal about an axis is expanded as f(xi) = sum_k f_k C~_k(<axis, xi>) in the
// Gegenbauer basis of index (n-1)/2, orthonormal for the weight (1-s^2)^{(n-2)/2} on [-1,1].
// Each mode extends as (a_k r^k + b_k r^{k+2}) C~_k(cos theta) (Almansi).

#include <span>
#include <vector>

#include "sobtrace/field.hpp"

namespace sobtrace {

/// Classical C_k^{lambda}(s) by the three-term recurrence; lambda = 0 returns the Chebyshev
/// limit T_k(s) (the n = 1 convention).
double gegenbauer_eval(int k, double lambda_g, double s);

/// Orthonormal C~_0..C~_kmax at s for the weight (1-s^2)^{lambda_g - 1/2}, lambda_g >= 0.
std::vector<double> gegenbauer_orthonormal(int kmax, double lambda_g, double s);
/// Same, with d/ds.
void gegenbauer_orthonormal_d(int kmax, double lambda_g, double s, std::vector<double>& p, std::vector<double>& dp);

struct ZonalExpansion {
  Vec axis;
  int n = 0;
  Vec coeffs;  // f_k, k = 0..kmax
};

/// Projects f (a field on S^n, zonal about axis) with `res` Gauss-Gegenbauer nodes.
/// Throws NonZonalError if f varies by more than 1e-8 along sampled latitude circles.
ZonalExpansion zonal_project(const ScalarField& f, std::span<const double> axis, int kmax, int res = 0);

/// Evaluates sum_k f_k C~_k(<axis, xi>) (no radial factor).
double zonal_eval(const ZonalExpansion& e, std::span<const double> xi);

struct ModeSolution {
  int k = 0;
  double a = 0.0;  // coefficient of r^k
  double b = 0.0;  // coefficient of r^{k+2}
};

/// a_k + b_k = f_k, k a_k + (k+2) b_k = beta f_k.
std::vector<ModeSolution> solve_modes(const ZonalExpansion& e, double beta);
/// Harmonic Dirichlet extension: a_k = f_k, b_k = 0.
std::vector<ModeSolution> harmonic_modes(const ZonalExpansion& e);

/// The extension as a Ball field. `margin` is the radial extent beyond the sphere on which
/// the series may be evaluated (it converges for r < 1/ratio of the coefficient decay).
ScalarField reconstruct(const std::vector<ModeSolution>& modes, std::span<const double> axis, int n,
                        double margin = 0.0);
double reconstruct_value(const std::vector<ModeSolution>& modes, std::span<const double> axis, int n,
                         std::span<const double> xi);
/// Analytic d/dr at xi (xi != 0).
double reconstruct_radial_derivative(const std::vector<ModeSolution>& modes, std::span<const double> axis, int n,
                                     std::span<const double> xi);
/// Analytic Laplacian: sum_k 2(2k + n + 1) b_k r^k C~_k.
double reconstruct_laplacian(const std::vector<ModeSolution>& modes, std::span<const double> axis, int n,
                             std::span<const double> xi);

struct OracleComparison {
  double sup_gap = 0.0;
  double tail_bound = 0.0;          // |z0|^{kmax+1}/(1-|z0|)
  bool truncation_warning = false;  // tail_bound above the comparison tolerance
  double max_neumann_defect = 0.0;  // |eta v - beta f| at the boundary samples, analytic
};

/// Biharmonic oracle (beta = 0 for n = 3, -(n-3)/2 for n > 3) against biharmonic_extension.
OracleComparison compare_closed_form(std::span<const double> z0, int n, int kmax, const std::vector<Vec>& samples,
                                     double tolerance = 1e-8);
/// Harmonic oracle against harmonic_extension (exponent (n-1)/2 in the prefactor).
OracleComparison compare_harmonic(std::span<const double> z0, int n, int kmax, const std::vector<Vec>& samples,
                                  double tolerance = 1e-8);

/// Geometric decay ratio of |f_k| estimated by a least-squares fit of log|f_k| over k in [k0, k1].
double decay_ratio(const ZonalExpansion& e, int k0, int k1);

}  // namespace sobtrace
