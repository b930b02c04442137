#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sobtrace/chart_geometry.hpp"
#include "sobtrace/vec.hpp"

namespace sobtrace {

/// Where a field's evaluator may be called.
///
/// `margin` extends the closed chart: a Ball field accepts |X| <= 1 + margin, a HalfSpace
/// field accepts t >= -margin. Closed-form families are analytic across the boundary and
/// advertise a positive margin; fields only defined on the closed chart use 0. A field with
/// `unrestricted` set (boundary data extended homogeneously, polynomials) accepts any point
/// outside its singular set.
struct FieldDomain {
  double margin = 0.0;
  bool unrestricted = false;
  std::vector<Vec> singular_points;
  double exclusion_radius = 1e-10;
};

class ScalarField {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;
  using ScaleFn = std::function<double(std::span<const double>)>;

  ScalarField(Chart chart, int n, Evaluator eval, std::string label, FieldDomain domain = {},
              ScaleFn scale = {});

  Chart chart() const { return chart_; }
  int n() const { return n_; }
  int dim() const { return n_ + 1; }
  const std::string& label() const { return label_; }
  const FieldDomain& domain() const { return *domain_; }

  /// Throws SingularPointError inside the singular set or on a non-finite value.
  double operator()(std::span<const double> X) const;
  double operator()(const ChartPoint& p) const { return (*this)(std::span<const double>(p.coords)); }
  /// nullopt inside the singular set or on a non-finite value; does not check the chart.
  std::optional<double> try_eval(std::span<const double> X) const;
  /// Raw evaluator without any checks.
  double eval_raw(std::span<const double> X) const { return (*eval_)(X); }

  bool in_singular_set(std::span<const double> X) const;
  /// Inside the closed chart extended by the margin, and not singular.
  bool admits(std::span<const double> X) const;

  /// Length on which the field varies near X; finite-difference steps are scaled by it.
  double local_scale(std::span<const double> X) const;

  /// Copy with a different label / domain / scale.
  ScalarField with_label(std::string label) const;
  ScalarField with_domain(FieldDomain domain) const;

 private:
  Chart chart_;
  int n_;
  std::shared_ptr<const Evaluator> eval_;
  std::string label_;
  std::shared_ptr<const FieldDomain> domain_;
  std::shared_ptr<const ScaleFn> scale_;
};

inline FieldDomain unrestricted_domain() {
  FieldDomain d;
  d.unrestricted = true;
  return d;
}

/// Field on the ball/half-space from a plain callable; convenience for tests and the CLI.
ScalarField make_field(Chart chart, int n, ScalarField::Evaluator eval, std::string label,
                       FieldDomain domain = unrestricted_domain());

/// Distance from X to the nearest recorded singular point (infinity if none).
double distance_to_singular(const FieldDomain& d, std::span<const double> X);

}  // namespace sobtrace
