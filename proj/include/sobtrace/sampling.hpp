#pragma once

// Deterministic point sets: Halton sequences and seeded random points.
//
// Uniform deviates are built from raw mt19937_64 output as (x >> 11) * 2^-53 and normals by
// Box-Muller, so the streams do not depend on the standard library's distribution classes.

#include <cstdint>
#include <random>
#include <vector>

#include "sobtrace/vec.hpp"

namespace sobtrace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal();
  Vec unit_vector(int dim);
  /// Uniform in the ball of radius r in R^dim.
  Vec in_ball(int dim, double r);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Radical inverse of index in the given prime base.
double halton(std::uint64_t index, int base);
/// Points of the Halton sequence in [0,1)^dim, starting at index 1.
std::vector<Vec> halton_points(int dim, int count);

/// Seeded points on S^n (in R^{n+1}).
std::vector<Vec> sphere_points(int n, int count, std::uint64_t seed);
/// Low-discrepancy points in the ball of radius rmax in R^{n+1}.
std::vector<Vec> ball_points(int n, int count, double rmax);
/// Low-discrepancy points of the box [-xmax, xmax]^n x [tmin, tmax] in R^{n+1}_+.
std::vector<Vec> halfspace_points(int n, int count, double xmax, double tmin, double tmax);

/// Random orthogonal matrix (row-major dim x dim) from Gram-Schmidt on Gaussian columns.
std::vector<double> random_rotation(int dim, Rng& rng);
Vec rotate(const std::vector<double>& R, std::span<const double> x);

}  // namespace sobtrace
