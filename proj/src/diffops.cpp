#include "sobtrace/diffops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sobtrace/errors.hpp"

namespace sobtrace {

namespace {

struct Window {
  std::vector<int> offsets;
  std::vector<double> weights;  // for unit step
  bool central = true;
};

int central_half_width(int p, int m) { return (p + 1) / 2 + m / 2 - 1; }

Window make_window(int first, int count, int p, bool central) {
  Window w;
  w.central = central;
  std::vector<double> nodes;
  for (int k = 0; k < count; ++k) {
    w.offsets.push_back(first + k);
    nodes.push_back(first + k);
  }
  w.weights = fornberg_weights(nodes, p);
  return w;
}

// Candidate windows for derivative order p: the central one first, then shifted windows with
// m + p nodes ordered by how far their midpoint is from 0.
std::vector<Window> candidate_windows(int p, int m) {
  std::vector<Window> out;
  const int K = central_half_width(p, m);
  out.push_back(make_window(-K, 2 * K + 1, p, true));
  const int N = m + p;
  std::vector<int> firsts;
  for (int first = -(N - 1); first <= 0; ++first) firsts.push_back(first);
  std::stable_sort(firsts.begin(), firsts.end(), [N](int a, int b) {
    return std::abs(2 * a + N - 1) < std::abs(2 * b + N - 1);
  });
  for (int first : firsts) out.push_back(make_window(first, N, p, false));
  return out;
}

const std::vector<Window>& windows(int p, int m) {
  // p <= 4, m in {2, 4}
  static const std::vector<Window> cache[5][2] = {
      {candidate_windows(0, 2), candidate_windows(0, 4)}, {candidate_windows(1, 2), candidate_windows(1, 4)},
      {candidate_windows(2, 2), candidate_windows(2, 4)}, {candidate_windows(3, 2), candidate_windows(3, 4)},
      {candidate_windows(4, 2), candidate_windows(4, 4)}};
  return cache[p][m == 4 ? 1 : 0];
}

[[noreturn]] void clearance_failure(const ScalarField& f, std::span<const double> X, const char* what) {
  std::ostringstream os;
  os << what << ": no stencil for field '" << f.label() << "' fits the domain at (";
  for (std::size_t i = 0; i < X.size(); ++i) os << (i ? "," : "") << X[i];
  os << ")";
  throw ClearanceError(os.str());
}

double richardson(std::vector<double> values, int first_exponent, int step) {
  // values[k] computed with step h/2^k.
  const int L = static_cast<int>(values.size());
  for (int level = 1; level < L; ++level) {
    const double factor = std::ldexp(1.0, first_exponent + (level - 1) * step) - 1.0;
    for (int k = L - 1; k >= level; --k) values[k] = values[k] + (values[k] - values[k - 1]) / factor;
  }
  return values.back();
}

double step_for(const ScalarField& f, std::span<const double> X, double h) { return h * f.local_scale(X); }

}  // namespace

void StencilConfig::validate() const {
  if (!(h > 0.0) || !(h_fourth > 0.0) || !(h_normal > 0.0)) throw DomainError("StencilConfig: steps must be > 0");
  if (scheme_order != 2 && scheme_order != 4) throw DomainError("StencilConfig: scheme_order must be 2 or 4");
  if (richardson_levels < 0 || richardson_levels > 3) throw DomainError("StencilConfig: richardson_levels in [0, 3]");
  if (one_sided_depth < 2) throw DomainError("StencilConfig: one_sided_depth must be >= 2");
}

StencilConfig polynomial_stencil() {
  StencilConfig c;
  c.h = c.h_fourth = c.h_normal = 0.2;
  c.richardson_levels = 0;
  return c;
}

StencilConfig third_order_stencil() {
  StencilConfig c;
  c.h = c.h_normal = 0.05;
  c.richardson_levels = 1;
  return c;
}

std::vector<double> fornberg_weights(std::span<const double> x, int p) {
  const int n = static_cast<int>(x.size());
  if (n <= p) throw DomainError("fornberg_weights: need more nodes than the derivative order");
  // c[j][k]: weight of node j for derivative k.
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(p) + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0];
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, p);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i];
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[j] = c[j][p];
  return w;
}

double partial(const ScalarField& f, std::span<const double> X, int axis, int p, const StencilConfig& cfg) {
  cfg.validate();
  if (p < 1 || p > 4) throw DomainError("partial: derivative order must be in [1, 4]");
  const double h = step_for(f, X, p >= 3 ? cfg.h_fourth : cfg.h);
  Vec Y(X.begin(), X.end());
  auto fits = [&](const Window& w) {
    for (int o : w.offsets) {
      Y[axis] = X[axis] + o * h;
      if (!f.admits(Y)) return false;
    }
    return true;
  };
  const Window* chosen = nullptr;
  for (const auto& w : windows(p, cfg.scheme_order))
    if (fits(w)) {
      chosen = &w;
      break;
    }
  if (!chosen) clearance_failure(f, X, "partial");
  std::vector<double> vals;
  for (int lev = 0; lev <= cfg.richardson_levels; ++lev) {
    const double hl = std::ldexp(h, -lev);
    double s = 0.0;
    for (std::size_t k = 0; k < chosen->offsets.size(); ++k) {
      if (chosen->weights[k] == 0.0) continue;
      Y[axis] = X[axis] + chosen->offsets[k] * hl;
      s += chosen->weights[k] * f(Y);
    }
    vals.push_back(s / std::pow(hl, p));
  }
  return richardson(std::move(vals), cfg.scheme_order, chosen->central ? 2 : 1);
}

double mixed_partial(const ScalarField& f, std::span<const double> X, int i, int p, int j, int q,
                     const StencilConfig& cfg) {
  cfg.validate();
  if (i == j) return partial(f, X, i, p + q, cfg);
  const double h = step_for(f, X, p + q >= 3 ? cfg.h_fourth : cfg.h);
  Vec Y(X.begin(), X.end());
  auto fits = [&](const Window& wi, const Window& wj) {
    for (int a : wi.offsets)
      for (int b : wj.offsets) {
        Y[i] = X[i] + a * h;
        Y[j] = X[j] + b * h;
        if (!f.admits(Y)) return false;
      }
    return true;
  };
  const Window* ci = nullptr;
  const Window* cj = nullptr;
  for (const auto& wi : windows(p, cfg.scheme_order)) {
    for (const auto& wj : windows(q, cfg.scheme_order))
      if (fits(wi, wj)) {
        ci = &wi;
        cj = &wj;
        break;
      }
    if (ci) break;
  }
  if (!ci) clearance_failure(f, X, "mixed_partial");
  std::vector<double> vals;
  for (int lev = 0; lev <= cfg.richardson_levels; ++lev) {
    const double hl = std::ldexp(h, -lev);
    double s = 0.0;
    for (std::size_t a = 0; a < ci->offsets.size(); ++a) {
      if (ci->weights[a] == 0.0) continue;
      for (std::size_t b = 0; b < cj->offsets.size(); ++b) {
        if (cj->weights[b] == 0.0) continue;
        Y[i] = X[i] + ci->offsets[a] * hl;
        Y[j] = X[j] + cj->offsets[b] * hl;
        s += ci->weights[a] * cj->weights[b] * f(Y);
      }
    }
    vals.push_back(s / std::pow(hl, p + q));
  }
  return richardson(std::move(vals), cfg.scheme_order, ci->central && cj->central ? 2 : 1);
}

Vec gradient(const ScalarField& f, std::span<const double> X, const StencilConfig& cfg) {
  Vec g(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) g[i] = partial(f, X, static_cast<int>(i), 1, cfg);
  return g;
}

double laplacian(const ScalarField& f, std::span<const double> X, const StencilConfig& cfg) {
  double s = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) s += partial(f, X, static_cast<int>(i), 2, cfg);
  return s;
}

double bilaplacian(const ScalarField& f, std::span<const double> X, const StencilConfig& cfg) {
  const int d = static_cast<int>(X.size());
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += partial(f, X, i, 4, cfg);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) s += 2.0 * mixed_partial(f, X, i, 2, j, 2, cfg);
  return s;
}

ScalarField laplacian_field(const ScalarField& f, const StencilConfig& cfg) {
  auto eval = [f, cfg](std::span<const double> X) { return laplacian(f, X, cfg); };
  auto scale = [f](std::span<const double> X) { return f.local_scale(X); };
  return ScalarField(f.chart(), f.n(), std::move(eval), "lap " + f.label(), f.domain(), scale);
}

const char* to_string(NormalKind k) {
  switch (k) {
    case NormalKind::EtaV: return "eta_v";
    case NormalKind::EtaDeltaV: return "eta_delta_v";
    case NormalKind::DtU: return "dt_u";
    case NormalKind::DtDeltaU: return "dt_delta_u";
  }
  return "?";
}

double one_sided_directional(const ScalarField& f, std::span<const double> X, std::span<const double> d, int p,
                             double h, const StencilConfig& cfg) {
  cfg.validate();
  const int N = std::max(cfg.one_sided_depth, p + 1);
  std::vector<double> nodes(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) nodes[k] = k;
  const std::vector<double> w = fornberg_weights(nodes, p);
  Vec Y(X.size());
  std::vector<double> vals;
  for (int lev = 0; lev <= cfg.richardson_levels; ++lev) {
    const double hl = std::ldexp(h, -lev);
    double s = 0.0;
    for (int k = 0; k < N; ++k) {
      for (std::size_t i = 0; i < X.size(); ++i) Y[i] = X[i] + k * hl * d[i];
      s += w[k] * f(Y);
    }
    vals.push_back(s / std::pow(hl, p));
  }
  return richardson(std::move(vals), N - p, 1);
}

double boundary_normal(const ScalarField& f, std::span<const double> P, NormalKind kind, const StencilConfig& cfg) {
  const bool ball_kind = kind == NormalKind::EtaV || kind == NormalKind::EtaDeltaV;
  if (ball_kind != (f.chart() == Chart::Ball)) {
    std::ostringstream os;
    os << "boundary_normal: kind " << to_string(kind) << " does not match the " << to_string(f.chart())
       << " chart of field '" << f.label() << "'";
    throw DomainError(os.str());
  }
  const bool laplace = kind == NormalKind::EtaDeltaV || kind == NormalKind::DtDeltaU;
  const ScalarField g = laplace ? laplacian_field(f, cfg) : f;
  const double h = step_for(f, P, cfg.h_normal);
  Vec d(P.size(), 0.0);
  if (ball_kind) {
    const double r = norm(P);
    if (r == 0.0) throw DomainError("boundary_normal: point at the origin");
    for (std::size_t i = 0; i < P.size(); ++i) d[i] = -P[i] / r;  // inward
    return -one_sided_directional(g, P, d, 1, h, cfg);
  }
  d.back() = 1.0;
  return one_sided_directional(g, P, d, 1, h, cfg);
}

ScalarField homogeneous_extension(const ScalarField& b) {
  auto eval = [b](std::span<const double> X) {
    const double r = norm(X);
    Vec xi(X.begin(), X.end());
    for (auto& v : xi) v /= r;
    return b.eval_raw(xi);
  };
  FieldDomain d;
  d.unrestricted = true;
  d.singular_points.push_back(Vec(static_cast<std::size_t>(b.dim()), 0.0));
  d.exclusion_radius = 1e-6;
  auto scale = [b](std::span<const double> X) {
    const double r = norm(X);
    Vec xi(X.begin(), X.end());
    for (auto& v : xi) v /= r;
    return std::min(b.local_scale(xi), 0.25);
  };
  return ScalarField(Chart::Ball, b.n(), std::move(eval), b.label() + "(X/|X|)", d, scale);
}

double tangential_laplacian(const ScalarField& b, std::span<const double> xi, const StencilConfig& cfg) {
  return laplacian(homogeneous_extension(b), xi, cfg);
}

double tangential_gradient_sq(const ScalarField& b, std::span<const double> xi, const StencilConfig& cfg) {
  const Vec g = gradient(homogeneous_extension(b), xi, cfg);
  return norm_sq(g);
}

double sphere_average(const ScalarField& f, std::span<const double> center, double r, const QuadRule& rule) {
  if (rule.domain != Domain::Sphere || rule.dim != static_cast<int>(center.size()))
    throw DomainError("sphere_average: rule must be a sphere rule of the field's ambient dimension");
  if (!(r > 0.0)) throw DomainError("sphere_average: radius must be > 0");
  const std::size_t d = center.size();
  auto g = [&](std::span<const double> s) -> std::optional<double> {
    Vec Y(d);
    for (std::size_t i = 0; i < d; ++i) Y[i] = center[i] + r * s[i];
    if (!f.admits(Y)) {
      std::ostringstream os;
      os << "sphere_average: sphere of radius " << r << " leaves the domain of '" << f.label() << "'";
      throw ClearanceError(os.str());
    }
    return f.try_eval(Y);
  };
  return integrate(rule, g) / rule.total_weight();
}

}  // namespace sobtrace
