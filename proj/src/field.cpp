#include "sobtrace/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sobtrace/errors.hpp"

namespace sobtrace {

ScalarField::ScalarField(Chart chart, int n, Evaluator eval, std::string label, FieldDomain domain,
                         ScaleFn scale)
    : chart_(chart),
      n_(n),
      eval_(std::make_shared<const Evaluator>(std::move(eval))),
      label_(std::move(label)),
      domain_(std::make_shared<const FieldDomain>(std::move(domain))),
      scale_(scale ? std::make_shared<const ScaleFn>(std::move(scale)) : nullptr) {
  if (n < 0) throw DomainError("ScalarField: n must be >= 0");
}

bool ScalarField::in_singular_set(std::span<const double> X) const {
  const double r2 = domain_->exclusion_radius * domain_->exclusion_radius;
  for (const auto& p : domain_->singular_points)
    if (dist_sq(X, p) <= r2) return true;
  return false;
}

std::optional<double> ScalarField::try_eval(std::span<const double> X) const {
  if (!domain_->singular_points.empty() && in_singular_set(X)) return std::nullopt;
  const double v = (*eval_)(X);
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

double ScalarField::operator()(std::span<const double> X) const {
  if (auto v = try_eval(X)) return *v;
  std::ostringstream os;
  os << "field '" << label_ << "' is singular at (";
  for (std::size_t i = 0; i < X.size(); ++i) os << (i ? "," : "") << X[i];
  os << ")";
  throw SingularPointError(os.str());
}

bool ScalarField::admits(std::span<const double> X) const {
  if (in_singular_set(X)) return false;
  if (domain_->unrestricted) return true;
  if (chart_ == Chart::Ball) return norm(X) <= 1.0 + domain_->margin + 1e-15;
  return X.back() >= -domain_->margin - 1e-15;
}

double ScalarField::local_scale(std::span<const double> X) const {
  if (scale_) return (*scale_)(X);
  return 1.0;
}

ScalarField ScalarField::with_label(std::string label) const {
  ScalarField f = *this;
  f.label_ = std::move(label);
  return f;
}

ScalarField ScalarField::with_domain(FieldDomain domain) const {
  ScalarField f = *this;
  f.domain_ = std::make_shared<const FieldDomain>(std::move(domain));
  return f;
}

ScalarField make_field(Chart chart, int n, ScalarField::Evaluator eval, std::string label, FieldDomain domain) {
  return ScalarField(chart, n, std::move(eval), std::move(label), std::move(domain));
}

double distance_to_singular(const FieldDomain& d, std::span<const double> X) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : d.singular_points) best = std::min(best, std::sqrt(dist_sq(X, p)));
  return best;
}

}  // namespace sobtrace
