#include "sobtrace/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sobtrace/chart_geometry.hpp"
#include "sobtrace/errors.hpp"

namespace sobtrace {

namespace {

void require_center(std::span<const double> c, int n, const char* what) {
  if (static_cast<int>(c.size()) != n + 1) {
    std::ostringstream os;
    os << what << ": center must have n+1 = " << n + 1 << " components";
    throw DomainError(os.str());
  }
  if (!(norm_sq(c) < 1.0)) {
    std::ostringstream os;
    os << what << ": center must lie in the open unit ball";
    throw DomainError(os.str());
  }
}

// The extensions are analytic for |xi| < 1/|omega|; the pole sits at omega/|omega|^2 at
// distance F(xi, omega)/|omega| from xi.
FieldDomain ball_extension_domain(double omega_norm) {
  FieldDomain d;
  d.margin = omega_norm > 0.0 ? std::min(0.5, 0.5 * (1.0 / omega_norm - 1.0)) : 0.5;
  return d;
}

ScalarField::ScaleFn ball_extension_scale(const Vec& omega) {
  const double w = norm(omega);
  return [omega, w](std::span<const double> xi) {
    if (w == 0.0) return 1.0;
    return std::min(1.0, std::sqrt(std::max(F_squared(xi, omega), 0.0)) / w);
  };
}

}  // namespace

ScalarField boundary_extremal(int order, int n, std::span<const double> z0) {
  if (order != 2 && order != 4) throw DomainError("boundary_extremal: order must be 2 or 4");
  if (n < 1 || (order == 4 && n < 3)) throw DomainError("boundary_extremal: unsupported (order, n)");
  require_center(z0, n, "boundary_extremal");
  Vec z(z0.begin(), z0.end());
  const bool logarithmic = (order == 2 && n == 1) || (order == 4 && n == 3);
  const double p = order == 2 ? 0.5 * (1 - n) : 0.5 * (3 - n);
  std::ostringstream label;
  label << "f[order " << order << ", n " << n << "]";
  ScalarField::Evaluator eval;
  if (logarithmic)
    eval = [z](std::span<const double> xi) { return -std::log(std::abs(1.0 - dot(z, xi))); };
  else
    eval = [z, p](std::span<const double> xi) { return std::pow(std::abs(1.0 - dot(z, xi)), p); };
  return make_field(Chart::Ball, n, std::move(eval), label.str());
}

ScalarField harmonic_extension(int n, std::span<const double> omega0) {
  if (n < 1) throw DomainError("harmonic_extension: n must be >= 1");
  require_center(omega0, n, "harmonic_extension");
  Vec w(omega0.begin(), omega0.end());
  const double w2 = norm_sq(w);
  ScalarField::Evaluator eval;
  if (n == 1) {
    const double c = std::log1p(w2);
    eval = [w, c](std::span<const double> xi) { return -std::log(F_squared(xi, w)) + c; };
  } else {
    const double pre = std::pow(1.0 + w2, 0.5 * (n - 1));
    eval = [w, pre, n](std::span<const double> xi) { return pre * std::pow(F_squared(xi, w), 0.5 * (1 - n)); };
  }
  return ScalarField(Chart::Ball, n, std::move(eval), "v[harmonic]", ball_extension_domain(std::sqrt(w2)),
                     ball_extension_scale(w));
}

ScalarField biharmonic_extension(int n, std::span<const double> omega0) {
  if (n < 3) throw DomainError("biharmonic_extension: n must be >= 3");
  require_center(omega0, n, "biharmonic_extension");
  Vec w(omega0.begin(), omega0.end());
  const double w2 = norm_sq(w);
  ScalarField::Evaluator eval;
  if (n == 3) {
    const double c = std::log1p(w2);
    eval = [w, w2, c](std::span<const double> xi) {
      const double F2 = F_squared(xi, w);
      const double s = 1.0 - norm_sq(xi);
      return -std::log(F2) + 0.5 * s * ((1.0 - w2) / F2 - 1.0) + c;
    };
  } else {
    const double pre = std::pow(1.0 + w2, 0.5 * (n - 3));
    eval = [w, w2, pre, n](std::span<const double> xi) {
      const double F2 = F_squared(xi, w);
      const double s = 1.0 - norm_sq(xi);
      return pre * std::pow(F2, 0.5 * (3 - n)) * (1.0 + (n - 3) * (1.0 - w2) * s / (4.0 * F2));
    };
  }
  return ScalarField(Chart::Ball, n, std::move(eval), "v[biharmonic]", ball_extension_domain(std::sqrt(w2)),
                     ball_extension_scale(w));
}

ScalarField halfspace_solution(const HalfSpaceExtremalParams& p) {
  if (!(p.lambda > 0.0)) throw DomainError("halfspace_solution: lambda must be > 0");
  if (p.a.empty()) throw DomainError("halfspace_solution: a must be non-empty");
  const int n = static_cast<int>(p.a.size());
  const Vec a = p.a;
  const double lam = p.lambda, c = p.c;
  auto eval = [a, lam, c, n](std::span<const double> X) {
    double q = (lam + X[n]) * (lam + X[n]);
    for (int i = 0; i < n; ++i) q += (X[i] - a[i]) * (X[i] - a[i]);
    const double t = X[n];
    return std::log(2.0 * lam / q) + 2.0 * t * lam / q + c * t * t;
  };
  FieldDomain d;
  d.margin = 0.5 * lam;
  auto scale = [lam](std::span<const double>) { return std::min(1.0, lam); };
  std::ostringstream label;
  label << "u[a,lambda=" << lam << ",c=" << c << "]";
  return ScalarField(Chart::HalfSpace, n, std::move(eval), label.str(), d, scale);
}

ScalarField sun_solution(std::span<const double> a, double lambda, double scale, int n) {
  if (!(lambda > 0.0)) throw DomainError("sun_solution: lambda must be > 0");
  if (!(scale > 0.0)) throw DomainError("sun_solution: scale must be > 0");
  if (n <= 3) throw DomainError("sun_solution: n must be > 3");
  if (static_cast<int>(a.size()) != n) throw DomainError("sun_solution: dim(a) must equal n");
  const Vec av(a.begin(), a.end());
  auto eval = [av, lambda, scale, n](std::span<const double> X) {
    const double t = X[n];
    double q = (lambda + t) * (lambda + t);
    for (int i = 0; i < n; ++i) q += (X[i] - av[i]) * (X[i] - av[i]);
    const double r = lambda / q;
    return scale * std::pow(r, 0.5 * (n - 3)) * (1.0 + (n - 3) * t * r);
  };
  FieldDomain d;
  d.margin = 0.5 * lambda;
  auto sc = [lambda](std::span<const double>) { return std::min(1.0, lambda); };
  return ScalarField(Chart::HalfSpace, n, std::move(eval), "U[sun]", d, sc);
}

ScalarField transfer_field(const ScalarField& field, TransferMode mode) {
  const int n = field.n();
  if (mode == TransferMode::WeightPower && n <= 3) throw DomainError("transfer_field: weight_power needs n > 3");
  if (mode == TransferMode::AdditiveLog && n != 3) throw DomainError("transfer_field: additive_log needs n = 3");
  const double p = 0.5 * (n - 3);
  const ScalarField src = field;

  if (field.chart() == Chart::Ball) {
    // Ball -> half-space; the image of {t >= -delta} stays inside |xi| <= 1 + 2 delta/(1-delta)^2.
    auto eval = [src, mode, p](std::span<const double> X) {
      Vec xi(X.size());
      mobius_apply(X, xi);
      const double cf = conformal_factor(X);
      const double v = src.eval_raw(xi);
      if (mode == TransferMode::WeightPower) return v * std::pow(cf, p);
      return v + 0.5 * (1.0 - norm_sq(xi)) + std::log(cf);
    };
    FieldDomain d;
    d.unrestricted = field.domain().unrestricted;
    d.margin = std::min(0.25, 0.25 * field.domain().margin);
    auto scale = [src](std::span<const double> X) {
      Vec xi(X.size());
      mobius_apply(X, xi);
      return std::min(1.0, src.local_scale(xi) / conformal_factor(X));
    };
    return ScalarField(Chart::HalfSpace, n, std::move(eval), field.label() + "->halfspace", d, scale);
  }

  auto eval = [src, mode, p](std::span<const double> xi) {
    Vec X(xi.size());
    if (!mobius_apply(xi, X)) return std::numeric_limits<double>::quiet_NaN();
    const double cf = conformal_factor(xi);  // 2/|xi + e|^2
    const double w = src.eval_raw(X);
    if (mode == TransferMode::WeightPower) return w * std::pow(cf, p);
    return w - 0.5 * (1.0 - norm_sq(xi)) + std::log(cf);
  };
  FieldDomain d;
  d.margin = 0.0;
  d.singular_points.push_back(unit_vector(n + 1, n, -1.0));
  d.exclusion_radius = 1e-8;
  auto scale = [src](std::span<const double> xi) {
    Vec X(xi.size());
    if (!mobius_apply(xi, X)) return 1e-8;
    return std::min(1.0, src.local_scale(X) * conformal_factor(X));
  };
  return ScalarField(Chart::Ball, n, std::move(eval), field.label() + "->ball", d, scale);
}

ScalarField constant_field(Chart chart, int n, double value) {
  std::ostringstream label;
  label << "const " << value;
  return make_field(chart, n, [value](std::span<const double>) { return value; }, label.str());
}

ScalarField affine_combination(const ScalarField& f, double alpha, const ScalarField& g, double beta, double kappa) {
  if (f.chart() != g.chart() || f.n() != g.n()) throw DomainError("affine_combination: chart/dimension mismatch");
  FieldDomain d;
  d.unrestricted = f.domain().unrestricted && g.domain().unrestricted;
  d.margin = std::min(f.domain().unrestricted ? 1e300 : f.domain().margin,
                      g.domain().unrestricted ? 1e300 : g.domain().margin);
  if (d.unrestricted) d.margin = 0.0;
  d.singular_points = f.domain().singular_points;
  d.singular_points.insert(d.singular_points.end(), g.domain().singular_points.begin(),
                           g.domain().singular_points.end());
  d.exclusion_radius = std::max(f.domain().exclusion_radius, g.domain().exclusion_radius);
  auto eval = [f, g, alpha, beta, kappa](std::span<const double> X) {
    return alpha * f.eval_raw(X) + beta * g.eval_raw(X) + kappa;
  };
  auto scale = [f, g](std::span<const double> X) { return std::min(f.local_scale(X), g.local_scale(X)); };
  return ScalarField(f.chart(), f.n(), std::move(eval), f.label() + "+" + g.label(), d, scale);
}

ScalarField shifted(const ScalarField& f, double kappa) {
  auto eval = [f, kappa](std::span<const double> X) { return f.eval_raw(X) + kappa; };
  auto scale = [f](std::span<const double> X) { return f.local_scale(X); };
  return ScalarField(f.chart(), f.n(), std::move(eval), f.label(), f.domain(), scale);
}

ScalarField scaled(const ScalarField& f, double alpha) {
  auto eval = [f, alpha](std::span<const double> X) { return alpha * f.eval_raw(X); };
  auto scale = [f](std::span<const double> X) { return f.local_scale(X); };
  return ScalarField(f.chart(), f.n(), std::move(eval), f.label(), f.domain(), scale);
}

}  // namespace sobtrace
