#pragma once

// Residuals of the boundary-value systems, the Euler-Lagrange equation on S^3, Pizzetti's
// formula, the quadratic structure of u - v and the logarithmic lower bound.

#include <string>
#include <utility>
#include <vector>

#include "sobtrace/diffops.hpp"
#include "sobtrace/field.hpp"
#include "sobtrace/quadrature.hpp"

namespace sobtrace {

struct SystemResidual {
  double interior_sup = 0.0;
  std::vector<std::pair<std::string, double>> boundary_sups;  // fixed order
  std::size_t interior_samples = 0;
  std::size_t boundary_samples = 0;

  double boundary(const std::string& name) const;
  double max_boundary() const;
  double worst() const;
};

/// Delta^2 v at interior samples; |eta v - beta f| ("neumann") and |v - f| ("dirichlet") at
/// boundary samples on S^n.
SystemResidual ball_system_residual(const ScalarField& v, const ScalarField& f, double beta,
                                    const std::vector<Vec>& interior, const std::vector<Vec>& boundary,
                                    const StencilConfig& cfg = {});

enum class Nonlinearity { Exp3, Power };

/// Delta^2 u at interior samples; |d_t Delta u - RHS| ("nonlinear") and |d_t u| ("neumann") at
/// boundary points (x, 0), RHS = 4 e^{3u} (Exp3, n = 3) or c u^{(n+3)/(n-3)} (Power, n > 3).
SystemResidual halfspace_system_residual(const ScalarField& u, Nonlinearity kind, double c,
                                         const std::vector<Vec>& interior, const std::vector<Vec>& boundary,
                                         const StencilConfig& cfg = {});

/// sup over boundary samples of |-eta Delta v - 2 Lap_S v + 4 - 8 pi^2 e^{3v}/oint e^{3v}| on S^3.
/// Checks first that |Delta^2 v| and |eta v| stay below precondition_tol at the samples
/// (PreconditionError otherwise).
double euler_lagrange_s3_residual(const ScalarField& v, const std::vector<Vec>& boundary, const QuadRule& sphere,
                                  const StencilConfig& cfg = {}, double precondition_tol = 1e-5);

/// |r^2/(2N) Delta w(X0) - (mean of w over dB_r(X0) - w(X0))| in R^N (r^2/8 Delta w for N = 4).
double pizzetti_gap(const ScalarField& w, std::span<const double> X0, double r, const QuadRule& sphere,
                    const StencilConfig& cfg = {});

struct QuadraticFit {
  double c_star = 0.0;
  Vec a_coeffs;   // coefficients of (x_i - x0_i)^2
  Vec b_coeffs;   // raw linear coefficients of the fit
  Vec x0;         // -b_i/(2 a_i); 0 where a_i vanishes
  double c0 = 0.0;
  double fit_residual = 0.0;  // RMS misfit
};

/// Least-squares fit of u - v = c_* t^2 + sum_i a_i x_i^2 + b_i x_i + c over the grid
/// (points in R^n x [0, inf)). RankDeficiencyError if the design matrix is rank deficient.
QuadraticFit quadratic_difference_fit(const ScalarField& u, const ScalarField& v, const std::vector<Vec>& grid);
/// Same with the differences already evaluated.
QuadraticFit quadratic_fit(const std::vector<Vec>& grid, const std::vector<double>& diff);

struct LowerBoundCheck {
  double c_hat_short = 0.0;  // max of -alpha log|X| - v(X) for |X| in [4, r_short]
  double c_hat_long = 0.0;   // same for |X| in [4, r_long]
  bool bounded = false;      // c_hat_long <= c_hat_short + 0.1 max(1, |c_hat_short|)
};

/// Samples v along the given rays (unit vectors in R^{n+1}_+) at log-spaced radii.
LowerBoundCheck log_lower_bound_check(const ScalarField& v, double alpha, const std::vector<Vec>& rays,
                                      double r_short = 1e2, double r_long = 1e3, int radii_per_decade = 8);

}  // namespace sobtrace
