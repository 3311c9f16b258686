#include "svilab/fan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "svilab/errors.hpp"
#include "svilab/region.hpp"

namespace svilab {

namespace {

// Euclidean projection onto the probability simplex.
Vector project_simplex(const Vector& v) {
  Vector s = v;
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (long i = 0; i < s.size(); ++i) {
    cumsum += s[i];
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (s[i] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

// Distance from p to conv(cols of q), by accelerated projected gradient.
double dist_to_hull(const Vector& p, const Matrix& q) {
  const long k = q.cols();
  const double lipschitz = (q.transpose() * q).eigenvalues().real().maxCoeff();
  if (!(lipschitz > 0.0)) return (p - q.col(0)).norm();
  Vector lam = Vector::Constant(k, 1.0 / static_cast<double>(k));
  Vector y = lam;
  double t = 1.0;
  for (int it = 0; it < 20000; ++it) {
    const Vector grad = q.transpose() * (q * y - p);
    const Vector next = project_simplex(y - grad / lipschitz);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - lam);
    const double moved = (next - lam).norm();
    lam = next;
    t = t_next;
    if (moved < 1e-15) break;
  }
  return (q * lam - p).norm();
}

}  // namespace

FanPrederivative::FanPrederivative(std::vector<Matrix> bundle, FanMode mode)
    : bundle_(std::move(bundle)), mode_(mode) {
  if (bundle_.empty()) throw DimensionError("FanPrederivative: empty bundle");
  for (const auto& a : bundle_) {
    if (a.rows() != bundle_.front().rows() || a.cols() != bundle_.front().cols()) {
      throw DimensionError("FanPrederivative: bundle members differ in shape");
    }
    if (a.rows() == 0 || a.cols() == 0) throw DimensionError("FanPrederivative: empty matrix");
    if (!a.allFinite()) throw NumericError("FanPrederivative: non-finite matrix");
  }
}

std::vector<Vector> hull_vertices(const std::vector<Vector>& points) {
  std::vector<Vector> uniq;
  for (const auto& p : points) {
    const bool dup = std::any_of(uniq.begin(), uniq.end(),
                                 [&](const Vector& q) { return (p - q).norm() <= 1e-12; });
    if (!dup) uniq.push_back(p);
  }
  if (uniq.size() <= 2) return uniq;
  if (uniq.front().size() == 1) {
    auto [lo, hi] = std::minmax_element(uniq.begin(), uniq.end(),
                                        [](const Vector& a, const Vector& b) { return a[0] < b[0]; });
    return {*lo, *hi};
  }
  double scale = 1.0;
  for (const auto& p : uniq) scale = std::max(scale, p.norm());
  std::vector<Vector> out;
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    Matrix others(uniq[i].size(), static_cast<long>(uniq.size() - 1));
    long c = 0;
    for (std::size_t j = 0; j < uniq.size(); ++j) {
      if (j != i) others.col(c++) = uniq[j];
    }
    if (dist_to_hull(uniq[i], others) > 1e-8 * scale) out.push_back(uniq[i]);
  }
  return out;
}

GeneratorSet fan_apply(const FanPrederivative& fan, const Vector& u) {
  require_same_dim(u.size(), fan.domain_dim(), "fan_apply");
  std::vector<Vector> images;
  images.reserve(fan.bundle().size());
  for (const auto& a : fan.bundle()) images.push_back(a * u);
  if (fan.mode() == FanMode::ConvexHull) images = hull_vertices(images);
  return GeneratorSet(std::move(images));
}

SigmaHResult sigma_H(const FanPrederivative& fan, const PolyhedralCone& cone, int samples,
                     std::uint64_t seed) {
  require_same_dim(fan.range_dim(), cone.dim(), "sigma_H");
  if (!cone.interior_witness()) {
    throw UnsupportedRepresentation("sigma_H: the cone has empty interior");
  }
  if (samples < 1) throw NumericError("sigma_H: sample count must be >= 1");
  std::mt19937_64 rng(seed);
  const auto dirs = sample_sphere(fan.domain_dim(), samples, rng);
  SigmaHResult res;
  res.samples = samples;
  res.seed = seed;
  res.value = -1.0;
  for (const auto& u : dirs) {
    const double c = core_measure(cone, fan_apply(fan, u)).value;
    if (c > res.value) {
      res.value = c;
      res.direction = u;
    }
  }
  return res;
}

FanPrederivative exact_partial_fan(const SviProblem& prob, const Vector& p, const Vector& x) {
  check_point_dims(prob, p, x);
  const auto& map = prob.map;
  switch (map.kind()) {
    case MapKind::Affine: {
      std::vector<Matrix> bundle;
      for (const auto& s : map.affine_scenarios()) {
        const bool seen = std::any_of(bundle.begin(), bundle.end(),
                                      [&](const Matrix& a) { return a.isApprox(s.A, 0.0); });
        if (!seen) bundle.push_back(s.A);
      }
      return FanPrederivative(std::move(bundle));
    }
    case MapKind::QuadraticShift:
      return FanPrederivative({2.0 * Vector::Ones(map.m()) * x.transpose()});
  }
  throw Error("exact_partial_fan: unknown map kind");
}

FanPrederivative exact_joint_fan(const SviProblem& prob, const Vector& p, const Vector& x) {
  check_point_dims(prob, p, x);
  const auto& map = prob.map;
  const int m = map.m();
  switch (map.kind()) {
    case MapKind::Affine: {
      std::vector<Matrix> bundle;
      for (const auto& s : map.affine_scenarios()) {
        Matrix j(m, map.n_p() + map.n_x());
        j << s.B, s.A;
        const bool seen = std::any_of(bundle.begin(), bundle.end(),
                                      [&](const Matrix& a) { return a.isApprox(j, 0.0); });
        if (!seen) bundle.push_back(std::move(j));
      }
      return FanPrederivative(std::move(bundle));
    }
    case MapKind::QuadraticShift: {
      Matrix j(m, 2);
      j.col(0) = -Vector::Ones(m);
      j.col(1) = 2.0 * x[0] * Vector::Ones(m);
      return FanPrederivative({std::move(j)});
    }
  }
  throw Error("exact_joint_fan: unknown map kind");
}

double outer_prederivative_defect(const SviProblem& prob, const FanPrederivative& partial_fan,
                                  const Vector& p, const Vector& x0, const Vector& x) {
  const Vector u = x - x0;
  const double step = u.norm();
  if (step == 0.0) return 0.0;
  const GeneratorSet moved = image_set(prob, p, x);
  const GeneratorSet base = image_set(prob, p, x0);
  const GeneratorSet lin = fan_apply(partial_fan, u);
  std::vector<Vector> sums;
  for (const auto& y : base.points()) {
    for (const auto& h : lin.points()) sums.push_back(y + h);
  }
  const GeneratorSet predicted(std::move(sums), base.recession());
  return excess(moved, predicted) / step;
}

}  // namespace svilab
