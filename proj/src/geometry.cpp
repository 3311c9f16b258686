#include "svilab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "svilab/errors.hpp"

namespace svilab {

void require_same_dim(long a, long b, const std::string& what) {
  if (a != b) {
    throw DimensionError(what + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw NumericError(std::string(what) + ": non-finite entry");
}

void require_supported_recession(const GeneratorSet& s, const PolyhedralCone& cone,
                                 const char* what) {
  if (s.recession() && !(*s.recession() == cone)) {
    throw UnsupportedRepresentation(std::string(what) +
                                    ": recession cone must equal the target cone");
  }
}

}  // namespace

PolyhedralCone::PolyhedralCone(int dim, std::vector<Vector> normals)
    : dim_(dim), normals_(std::move(normals)) {
  if (dim_ <= 0) throw DimensionError("PolyhedralCone: dimension must be positive");
  for (auto& a : normals_) {
    require_same_dim(a.size(), dim_, "PolyhedralCone normal");
    require_finite(a, "PolyhedralCone normal");
    const double n = a.norm();
    if (n == 0.0) throw NumericError("PolyhedralCone: zero normal");
    a /= n;
  }
  for (std::size_t i = 0; i < normals_.size() && orthogonal_; ++i) {
    for (std::size_t j = i + 1; j < normals_.size(); ++j) {
      if (std::abs(normals_[i].dot(normals_[j])) > kNormalTol) {
        orthogonal_ = false;
        break;
      }
    }
  }
}

PolyhedralCone PolyhedralCone::orthant(int dim) {
  std::vector<Vector> normals;
  normals.reserve(dim);
  for (int i = 0; i < dim; ++i) normals.push_back(Vector::Unit(dim, i));
  return PolyhedralCone(dim, std::move(normals));
}

PolyhedralCone PolyhedralCone::halfspace(const Vector& normal) {
  return PolyhedralCone(static_cast<int>(normal.size()), {normal});
}

PolyhedralCone PolyhedralCone::whole_space(int dim) { return PolyhedralCone(dim, {}); }

double PolyhedralCone::min_margin(const Vector& y) const {
  require_same_dim(y.size(), dim_, "PolyhedralCone::min_margin");
  double m = std::numeric_limits<double>::infinity();
  for (const auto& a : normals_) m = std::min(m, a.dot(y));
  return m;
}

bool PolyhedralCone::contains(const Vector& y, double tol) const {
  return min_margin(y) >= -tol;
}

std::optional<Vector> PolyhedralCone::interior_witness() const {
  if (normals_.empty()) return Vector::Zero(dim_);
  // Projected subgradient ascent on y -> min_i <a_i, y> over the unit ball.
  Vector y = Vector::Zero(dim_);
  for (const auto& a : normals_) y += a;
  for (int k = 1; k <= 4000; ++k) {
    if (y.norm() > 1.0) y.normalize();
    std::size_t worst = 0;
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < normals_.size(); ++i) {
      const double v = normals_[i].dot(y);
      if (v < m) {
        m = v;
        worst = i;
      }
    }
    if (m > kNormalTol) return y;
    y += normals_[worst] / std::sqrt(static_cast<double>(k));
  }
  return std::nullopt;
}

bool operator==(const PolyhedralCone& a, const PolyhedralCone& b) {
  if (a.dim_ != b.dim_) return false;
  auto covered = [](const std::vector<Vector>& from, const std::vector<Vector>& in) {
    return std::all_of(from.begin(), from.end(), [&](const Vector& u) {
      return std::any_of(in.begin(), in.end(),
                         [&](const Vector& v) { return (u - v).norm() <= kNormalTol; });
    });
  };
  return covered(a.normals_, b.normals_) && covered(b.normals_, a.normals_);
}

GeneratorSet::GeneratorSet(std::vector<Vector> points,
                           std::optional<PolyhedralCone> recession)
    : points_(std::move(points)), recession_(std::move(recession)) {
  if (points_.empty()) throw DimensionError("GeneratorSet: empty point list");
  const long d = points_.front().size();
  if (d == 0) throw DimensionError("GeneratorSet: zero-dimensional points");
  for (const auto& p : points_) {
    require_same_dim(p.size(), d, "GeneratorSet point");
    require_finite(p, "GeneratorSet point");
  }
  if (recession_) require_same_dim(recession_->dim(), d, "GeneratorSet recession");
}

bool HalfspaceSet::contains(const Vector& y, double tol) const {
  require_same_dim(y.size(), dim, "HalfspaceSet::contains");
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (normals[i].dot(y) < offsets[i] - tol) return false;
  }
  return true;
}

Vector project_onto_cone(const Vector& y, const PolyhedralCone& cone) {
  require_same_dim(y.size(), cone.dim(), "project_onto_cone");
  require_finite(y, "project_onto_cone");
  const auto& normals = cone.normals();
  if (cone.has_orthogonal_normals()) {
    Vector z = y;
    for (const auto& a : normals) z -= std::min(a.dot(y), 0.0) * a;
    return z;
  }
  // Dykstra: cyclic projections onto the halfspaces with correction terms.
  const std::size_t k = normals.size();
  std::vector<Vector> corrections(k, Vector::Zero(y.size()));
  Vector x = y;
  for (int iter = 0; iter < kProjectionMaxIters; ++iter) {
    const Vector start = x;
    for (std::size_t i = 0; i < k; ++i) {
      const Vector z = x + corrections[i];
      const double v = normals[i].dot(z);
      x = v < 0.0 ? Vector(z - v * normals[i]) : z;
      corrections[i] = z - x;
    }
    if ((x - start).norm() <= kProjectionTol && cone.min_margin(x) >= -kProjectionTol) {
      break;
    }
  }
  // Dykstra crawls on narrow wedges. The exact projection is the null-space
  // projection onto some active subset with nonnegative multipliers, so try
  // the subset flagged by the corrections and, for few normals, all subsets.
  const double slack = kProjectionTol * (1.0 + y.norm());
  auto candidate = [&](const std::vector<std::size_t>& idx) -> std::optional<Vector> {
    Matrix a(static_cast<long>(idx.size()), y.size());
    for (std::size_t i = 0; i < idx.size(); ++i) a.row(static_cast<long>(i)) = normals[idx[i]].transpose();
    const Vector lambda = (a * a.transpose()).completeOrthogonalDecomposition().solve(-(a * y));
    const Vector z = y + a.transpose() * lambda;
    if (lambda.minCoeff() < -slack || cone.min_margin(z) < -slack) return std::nullopt;
    if ((a * z).cwiseAbs().maxCoeff() > slack) return std::nullopt;
    return z;
  };
  if (cone.min_margin(x) >= -kProjectionTol && std::abs((y - x).dot(x)) <= slack) return x;
  std::vector<std::size_t> flagged;
  for (std::size_t i = 0; i < k; ++i) {
    if (corrections[i].norm() > 0.0) flagged.push_back(i);
  }
  std::optional<Vector> best;
  if (!flagged.empty()) best = candidate(flagged);
  if (!best && k <= 12) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < k; ++i) {
        if (mask & (std::size_t{1} << i)) idx.push_back(i);
      }
      if (const auto z = candidate(idx); z && (!best || (y - *z).norm() < (y - *best).norm())) best = z;
    }
  }
  if (best) return *best;
  return x;
}

double dist_point_to_cone(const Vector& y, const PolyhedralCone& cone) {
  require_same_dim(y.size(), cone.dim(), "dist_point_to_cone");
  if (cone.has_orthogonal_normals()) {
    double s = 0.0;
    for (const auto& a : cone.normals()) {
      const double v = std::min(a.dot(y), 0.0);
      s += v * v;
    }
    return std::sqrt(s);
  }
  return (y - project_onto_cone(y, cone)).norm();
}

double dist_point_to_set(const Vector& y, const GeneratorSet& set) {
  require_same_dim(y.size(), set.dim(), "dist_point_to_set");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : set.points()) {
    const double d = set.recession() ? dist_point_to_cone(y - b, *set.recession())
                                     : (y - b).norm();
    best = std::min(best, d);
  }
  return best;
}

double excess(const GeneratorSet& a, const PolyhedralCone& cone) {
  require_same_dim(a.dim(), cone.dim(), "excess");
  require_supported_recession(a, cone, "excess");
  double worst = 0.0;
  for (const auto& y : a.points()) worst = std::max(worst, dist_point_to_cone(y, cone));
  return worst;
}

double excess(const GeneratorSet& a, const GeneratorSet& b) {
  require_same_dim(a.dim(), b.dim(), "excess");
  if (a.recession() && !(b.recession() && *a.recession() == *b.recession())) {
    throw UnsupportedRepresentation(
        "excess: an unbounded set is only supported over a set with the same "
        "recession cone");
  }
  // With a common recession cone K, dist(a + k, B + K) <= dist(a, B + K), so
  // the supremum is attained on the generators.
  double worst = 0.0;
  for (const auto& y : a.points()) worst = std::max(worst, dist_point_to_set(y, b));
  return worst;
}

double hausdorff(const GeneratorSet& a, const GeneratorSet& b) {
  return std::max(excess(a, b), excess(b, a));
}

HalfspaceSet star_difference(const PolyhedralCone& cone, const GeneratorSet& s) {
  require_same_dim(s.dim(), cone.dim(), "star_difference");
  require_supported_recession(s, cone, "star_difference");
  HalfspaceSet out;
  out.dim = cone.dim();
  out.normals = cone.normals();
  out.offsets.reserve(out.normals.size());
  for (const auto& a : out.normals) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& p : s.points()) lo = std::min(lo, a.dot(p));
    out.offsets.push_back(-lo);
  }
  return out;
}

CoreMeasure core_measure(const PolyhedralCone& cone, const GeneratorSet& s) {
  const HalfspaceSet diff = star_difference(cone, s);
  if (diff.normals.empty()) {
    return {std::numeric_limits<double>::infinity(), CoreStatus::Positive,
            std::numeric_limits<double>::infinity()};
  }
  // With unit normals, rB fits in {<a_i, y> >= b_i} iff r <= -b_i for all i.
  double margin = std::numeric_limits<double>::infinity();
  for (double b : diff.offsets) margin = std::min(margin, -b);
  if (margin > kNormalTol) return {margin, CoreStatus::Positive, margin};
  if (margin >= -kNormalTol) return {0.0, CoreStatus::Boundary, margin};
  return {0.0, CoreStatus::Empty, margin};
}

PolyhedralCone tangent_cone(const PolyhedralCone& cone, const Vector& y,
                            double active_tol) {
  require_same_dim(y.size(), cone.dim(), "tangent_cone");
  if (!cone.contains(y, kFeasTol)) {
    throw InfeasiblePoint("tangent_cone: point does not belong to the cone");
  }
  std::vector<Vector> active;
  for (const auto& a : cone.normals()) {
    if (std::abs(a.dot(y)) <= active_tol) active.push_back(a);
  }
  return PolyhedralCone(cone.dim(), std::move(active));
}

}  // namespace svilab
