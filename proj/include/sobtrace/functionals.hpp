#pragma once

// Both sides of the sharp trace inequalities on B^{n+1}, the half-space energy identity and
// the volume quantities of the half-space problem.

#include <optional>

#include "sobtrace/diffops.hpp"
#include "sobtrace/field.hpp"
#include "sobtrace/quadrature.hpp"

namespace sobtrace {

struct InequalityConstants {
  int n = 0;
  double a_n = 0.0;     // 2 Gamma((n+3)/2)/Gamma((n-3)/2) |S^n|^{3/n}, n > 3 (else NaN)
  double b_n = 0.0;     // (n+1)(n-3)/2
  double sharp2 = 0.0;  // Gamma((n+1)/2)/Gamma((n-1)/2) |S^n|^{1/n}, n > 1 (else NaN)
};

InequalityConstants constants(int n);

struct DeficitRules {
  QuadRule sphere;  // Sphere rule on S^n
  QuadRule ball;    // Ball rule on B^{n+1}
  StencilConfig cfg;
  bool check_preconditions = true;
};

struct DeficitReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double deficit = 0.0;  // rhs - lhs
  RuleMeta sphere_meta;
  RuleMeta ball_meta;
  std::size_t sphere_nodes = 0;
  std::size_t ball_nodes = 0;
};

/// deficit = RHS - LHS for
///   order 2, n = 1:  log(1/2pi oint e^f)          <= 1/4pi int |grad v|^2 + 1/2pi oint f
///   order 2, n > 1:  sharp2 (oint |f|^{2n/(n-1)})^{(n-1)/n} <= int |grad v|^2 + (n-1)/2 oint f^2
///   order 4, n = 3:  log(1/2pi^2 oint e^{3f})     <= 3/16pi^2 int (lap v)^2 + 3/8pi^2 oint |grad f|^2 + 3/2pi^2 oint f
///   order 4, n > 3:  a_n (oint |f|^{2n/(n-3)})^{(n-3)/n} <= int (lap v)^2 + 2 oint |grad f|^2 + b_n oint f^2
/// The order-4 cases require eta v = 0 (n = 3) or eta v = -(n-3)/2 f (n > 3); with
/// check_preconditions, v = f (1e-8) and the Neumann condition (1e-6) are checked at 32
/// sphere points and PreconditionError names the failing condition.
DeficitReport deficit(int order, int n, const ScalarField& f, const ScalarField& v, const DeficitRules& rules);

/// Throws PreconditionError unless |v - f| <= dirichlet_tol and |eta v - beta f| <= neumann_tol
/// at 32 seeded sphere points. beta = nullopt skips the Neumann check.
void check_boundary_conditions(const ScalarField& f, const ScalarField& v, std::optional<double> beta,
                               const StencilConfig& cfg, double dirichlet_tol = 1e-8, double neumann_tol = 1e-6);

struct EnergyRules {
  int halfspace_res = 16;         // radial and angular resolution of the compactified R^{n+1}_+ rule
  int halfspace_res_check = 0;    // coarser resolution for the stability check (0: 2/3 halfspace_res)
  double stability_tol = 1e-3;    // relative change allowed between the two resolutions
  QuadRule sphere;
  QuadRule ball;
  StencilConfig cfg;
};

struct EnergyIdentity {
  double left = 0.0;            // int_{R^{n+1}_+} |lap U|^2, U = transfer(v, weight_power)
  double left_check = 0.0;      // same at the (coarser) check resolution
  double right = 0.0;           // int_B (lap v)^2 + 2 oint |grad f|^2 + b_n oint f^2
  double ball_term = 0.0;
  double gradient_term = 0.0;
  double mass_term = 0.0;
  double gap = 0.0;             // |left - right|
  double relative_gap = 0.0;    // gap / max(|left|, |right|)
};

/// Both sides of the energy identity for v on B^{n+1}, n > 3. ConvergenceError if the
/// half-space integral changes by more than stability_tol between the two resolutions.
EnergyIdentity energy_identity(const ScalarField& v, int n, const EnergyRules& rules);
double energy_identity_gap(const ScalarField& v, int n, const EnergyRules& rules);

struct VolumeRules {
  int boundary_res = 48;   // compactified R^n rule
  int interior_res = 24;   // compactified R^{n+1}_+ rule
  double growth_tol = 0.10;
};

struct VolumeReport {
  double boundary_volume = 0.0;           // int_{R^n} e^{3u(x,0)} dx (n = 3)
  double interior_volume = 0.0;           // int_{R^{n+1}_+} e^{4u}
  double alpha = 0.0;                     // 2 boundary_volume / |S^3|
  double boundary_volume_fine = 0.0;
  double interior_volume_fine = 0.0;
  bool boundary_divergent = false;
  bool interior_divergent = false;
};

/// Integrals at res and 2 res; an integral is flagged divergent when it is not finite or
/// grows by more than growth_tol (relative) under the doubling.
VolumeReport volumes_and_alpha(const ScalarField& u, const VolumeRules& rules = {});

}  // namespace sobtrace
