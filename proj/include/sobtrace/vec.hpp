#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace sobtrace {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(std::span<const double> a) { return dot(a, a); }
inline double norm(std::span<const double> a) { return std::sqrt(norm_sq(a)); }

inline double dist_sq(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline Vec unit_vector(int dim, int axis, double scale = 1.0) {
  Vec e(static_cast<std::size_t>(dim), 0.0);
  e[static_cast<std::size_t>(axis)] = scale;
  return e;
}

inline Vec scaled(std::span<const double> a, double s) {
  Vec r(a.begin(), a.end());
  for (auto& x : r) x *= s;
  return r;
}

/// |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2), the area of the unit n-sphere in R^{n+1}.
inline double sphere_area(int n) {
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

}  // namespace sobtrace
