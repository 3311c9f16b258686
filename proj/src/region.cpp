#include "svilab/region.hpp"

#include <cmath>
#include <limits>

#include "svilab/errors.hpp"

namespace svilab {

void RegionSpec::validate() const {
  if (center.size() == 0) throw DimensionError("RegionSpec: empty center");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw NumericError("RegionSpec: radius must be positive");
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw NumericError("RegionSpec: h must be positive");
  if (samples < 1) throw NumericError("RegionSpec: sample count must be >= 1");
}

std::vector<double> axis_offsets(double radius, double h) {
  if (!(h > 0.0) || !(radius >= 0.0)) throw NumericError("axis_offsets: bad radius/step");
  const long n = static_cast<long>(std::floor(radius / h + 1e-9));
  std::vector<double> out;
  out.reserve(2 * n + 1);
  for (long i = -n; i <= n; ++i) out.push_back(static_cast<double>(i) * h);
  return out;
}

std::vector<Vector> box_grid(const Vector& center, double radius, double h) {
  const auto offsets = axis_offsets(radius, h);
  const long d = center.size();
  if (d == 0) throw DimensionError("box_grid: empty center");
  const double total = std::pow(static_cast<double>(offsets.size()), static_cast<double>(d));
  if (total > static_cast<double>(kMaxGridPoints)) {
    throw NumericError("box_grid: grid too large");
  }
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    Vector v(d);
    for (long k = 0; k < d; ++k) v[k] = center[k] + offsets[idx[k]];
    out.push_back(std::move(v));
    long k = d - 1;
    while (k >= 0 && ++idx[k] == offsets.size()) idx[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

std::vector<Vector> box_grid(const RegionSpec& region) {
  region.validate();
  return box_grid(region.center, region.radius, region.h);
}

std::vector<Vector> ball_grid(const Vector& center, double radius, double h) {
  auto pts = box_grid(center, radius, h);
  if (center.size() == 1) return pts;
  std::vector<Vector> out;
  out.reserve(pts.size());
  for (auto& p : pts) {
    if ((p - center).norm() <= radius * (1.0 + 1e-12)) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Vector> sample_sphere(int dim, int count, std::mt19937_64& rng) {
  if (dim <= 0) throw DimensionError("sample_sphere: dimension must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    const double n = v.norm();
    if (n < 1e-12) continue;
    out.push_back(v / n);
  }
  return out;
}

double dist_to_points(const Vector& x, const std::vector<Vector>& points) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : points) best = std::min(best, (x - p).norm());
  return best;
}

Vector concat(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace svilab
