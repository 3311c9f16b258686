#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "svilab/geometry.hpp"

namespace svilab {

/// A sampling region: a ball (or box) around `center`, scanned on a lattice
/// of step `h` anchored at the center, plus a sample count and seed for the
/// randomized estimators.
struct RegionSpec {
  Vector center;
  double radius = 1.0;
  double h = 1e-2;
  int samples = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

inline constexpr std::size_t kMaxGridPoints = 20'000'000;

/// Offsets i*h for |i*h| <= radius.
std::vector<double> axis_offsets(double radius, double h);

/// Lattice points of the axis-aligned box [center - radius, center + radius].
std::vector<Vector> box_grid(const Vector& center, double radius, double h);
std::vector<Vector> box_grid(const RegionSpec& region);

/// Lattice points inside the closed Euclidean ball B(center, radius).
std::vector<Vector> ball_grid(const Vector& center, double radius, double h);

/// Uniform directions on the unit sphere (normalized Gaussians).
std::vector<Vector> sample_sphere(int dim, int count, std::mt19937_64& rng);

/// Minimum Euclidean distance from x to a finite list; +inf when empty.
double dist_to_points(const Vector& x, const std::vector<Vector>& points);

Vector concat(const Vector& a, const Vector& b);

}  // namespace svilab
