#include "sobtrace/sampling.hpp"

#include <cmath>
#include <numbers>

#include "sobtrace/errors.hpp"

namespace sobtrace {

namespace {
constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Vec Rng::unit_vector(int dim) {
  for (;;) {
    Vec v(static_cast<std::size_t>(dim));
    for (auto& x : v) x = normal();
    const double r = norm(v);
    if (r > 1e-12) {
      for (auto& x : v) x /= r;
      return v;
    }
  }
}

Vec Rng::in_ball(int dim, double r) {
  Vec v = unit_vector(dim);
  const double s = r * std::pow(uniform(), 1.0 / dim);
  for (auto& x : v) x *= s;
  return v;
}

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
  }
  return r;
}

std::vector<Vec> halton_points(int dim, int count) {
  if (dim < 1 || dim > static_cast<int>(std::size(kPrimes))) throw DomainError("halton_points: unsupported dimension");
  std::vector<Vec> pts(static_cast<std::size_t>(count), Vec(static_cast<std::size_t>(dim)));
  for (int i = 0; i < count; ++i)
    for (int k = 0; k < dim; ++k) pts[i][k] = halton(static_cast<std::uint64_t>(i + 1), kPrimes[k]);
  return pts;
}

std::vector<Vec> sphere_points(int n, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pts.push_back(rng.unit_vector(n + 1));
  return pts;
}

std::vector<Vec> ball_points(int n, int count, double rmax) {
  // Rejection from the Halton box keeps the set low-discrepancy and deterministic.
  const int d = n + 1;
  std::vector<Vec> pts;
  std::uint64_t i = 1;
  while (static_cast<int>(pts.size()) < count) {
    Vec x(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) x[k] = rmax * (2.0 * halton(i, kPrimes[k]) - 1.0);
    ++i;
    if (norm(x) <= rmax) pts.push_back(std::move(x));
  }
  return pts;
}

std::vector<Vec> halfspace_points(int n, int count, double xmax, double tmin, double tmax) {
  std::vector<Vec> pts = halton_points(n + 1, count);
  for (auto& p : pts) {
    for (int k = 0; k < n; ++k) p[k] = xmax * (2.0 * p[k] - 1.0);
    p[n] = tmin + (tmax - tmin) * p[n];
  }
  return pts;
}

std::vector<double> random_rotation(int dim, Rng& rng) {
  std::vector<double> R(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i) {
    for (;;) {
      Vec v(static_cast<std::size_t>(dim));
      for (auto& x : v) x = rng.normal();
      for (int j = 0; j < i; ++j) {
        double p = 0.0;
        for (int k = 0; k < dim; ++k) p += v[k] * R[j * dim + k];
        for (int k = 0; k < dim; ++k) v[k] -= p * R[j * dim + k];
      }
      const double r = norm(v);
      if (r < 1e-6) continue;
      for (int k = 0; k < dim; ++k) R[i * dim + k] = v[k] / r;
      break;
    }
  }
  return R;
}

Vec rotate(const std::vector<double>& R, std::span<const double> x) {
  const std::size_t d = x.size();
  Vec y(d, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) y[i] += R[i * d + k] * x[k];
  return y;
}

}  // namespace sobtrace
