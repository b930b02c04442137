#pragma once

// Finite-difference operators on ScalarFields.
//
// Stencils are built from Fornberg weights. A central stencil is used when all of its nodes
// are admitted by the field; otherwise a shifted window with scheme_order + p nodes that
// stays inside the field's domain. Richardson extrapolation in h/2^k removes the leading
// error terms (even powers for central stencils, all powers for shifted ones). Steps are
// multiplied by the field's local scale at the evaluation point.

#include <span>
#include <vector>

#include "sobtrace/field.hpp"
#include "sobtrace/quadrature.hpp"

namespace sobtrace {

struct StencilConfig {
  double h = 0.02;          // first and second derivatives
  double h_fourth = 0.1;    // fourth and mixed fourth derivatives
  double h_normal = 0.02;   // one-sided boundary-normal stencils
  int scheme_order = 4;
  int richardson_levels = 2;
  int one_sided_depth = 5;

  void validate() const;
};

/// For polynomial fields of degree <= scheme_order + 1, where the base stencils are exact:
/// wide steps and no extrapolation, so only roundoff remains.
StencilConfig polynomial_stencil();
/// Wider steps, one extrapolation level: third-order quantities such as eta(Delta v), where
/// roundoff from the nested stencils dominates the truncation error.
StencilConfig third_order_stencil();

/// Fornberg weights for the derivative of order p at 0 from the given node offsets.
std::vector<double> fornberg_weights(std::span<const double> nodes, int p);

/// d^p f / dX_axis^p.
double partial(const ScalarField& f, std::span<const double> X, int axis, int p, const StencilConfig& cfg = {});
/// d^p f / dX_i^p dX_j^q with tensor stencils.
double mixed_partial(const ScalarField& f, std::span<const double> X, int i, int p, int j, int q,
                     const StencilConfig& cfg = {});
Vec gradient(const ScalarField& f, std::span<const double> X, const StencilConfig& cfg = {});

double laplacian(const ScalarField& f, std::span<const double> X, const StencilConfig& cfg = {});
/// sum_i d_i^4 + 2 sum_{i<j} d_i^2 d_j^2.
double bilaplacian(const ScalarField& f, std::span<const double> X, const StencilConfig& cfg = {});
/// Field X -> laplacian(f, X); the result inherits f's chart and domain.
ScalarField laplacian_field(const ScalarField& f, const StencilConfig& cfg = {});

enum class NormalKind { EtaV, EtaDeltaV, DtU, DtDeltaU };

const char* to_string(NormalKind k);

/// One-sided interior estimate at a boundary point: eta = d/dr on S^n (ball chart), d/dt at
/// t = 0 (half-space chart). Throws DomainError on a chart/kind mismatch.
double boundary_normal(const ScalarField& f, std::span<const double> boundary_point, NormalKind kind,
                       const StencilConfig& cfg = {});

/// Derivative of g(s) = f(X + s d) at s = 0 from nodes s = 0, h, 2h, ... (one-sided forward).
double one_sided_directional(const ScalarField& f, std::span<const double> X, std::span<const double> d, int p,
                             double h, const StencilConfig& cfg);

/// Degree-0 homogeneous extension X -> f(X/|X|) of a field given on S^n.
ScalarField homogeneous_extension(const ScalarField& boundary_field);

/// Laplace-Beltrami on S^n and |grad f|^2 via the homogeneous extension.
double tangential_laplacian(const ScalarField& boundary_field, std::span<const double> xi,
                            const StencilConfig& cfg = {});
double tangential_gradient_sq(const ScalarField& boundary_field, std::span<const double> xi,
                              const StencilConfig& cfg = {});

/// Mean of f over the sphere of radius r about center, with a Sphere rule of matching dimension.
double sphere_average(const ScalarField& f, std::span<const double> center, double r, const QuadRule& rule);

}  // namespace sobtrace
