#pragma once

// Finite-dimensional geometric primitives: polyhedral cones, generator-set
// representations of (possibly unbounded) sets, point-to-set distances,
// excess, Pompeiu-Hausdorff distance, the *-difference and the core measure.

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace svilab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kProjectionTol = 1e-10;
inline constexpr int kProjectionMaxIters = 10000;
inline constexpr double kActiveTol = 1e-9;
inline constexpr double kFeasTol = 1e-9;
inline constexpr double kNormalTol = 1e-12;

/// Closed convex cone {y : <a_i, y> >= 0 for all i} with unit inward normals.
/// An empty normal list is the whole space.
class PolyhedralCone {
 public:
  /// Normals are rescaled to unit length; a zero normal is rejected.
  PolyhedralCone(int dim, std::vector<Vector> normals);

  static PolyhedralCone orthant(int dim);
  static PolyhedralCone halfspace(const Vector& normal);
  static PolyhedralCone whole_space(int dim);

  int dim() const { return dim_; }
  const std::vector<Vector>& normals() const { return normals_; }
  bool is_whole_space() const { return normals_.empty(); }
  /// True when every pair of normals is orthogonal, which makes the
  /// projection separable (orthant, single halfspace, ...).
  bool has_orthogonal_normals() const { return orthogonal_; }

  bool contains(const Vector& y, double tol = kFeasTol) const;
  /// Smallest <a_i, y>; +inf for the whole space.
  double min_margin(const Vector& y) const;

  /// A point y with <a_i, y> > 0 for every normal, certifying int C != {}.
  std::optional<Vector> interior_witness() const;

  /// Same dimension and same normal set (order-insensitive).
  friend bool operator==(const PolyhedralCone& a, const PolyhedralCone& b);

 private:
  int dim_;
  std::vector<Vector> normals_;
  bool orthogonal_ = true;
};

/// {points} + recession, or the finite point set itself when recession is
/// absent. Always nonempty.
class GeneratorSet {
 public:
  GeneratorSet(std::vector<Vector> points,
               std::optional<PolyhedralCone> recession = std::nullopt);

  int dim() const { return static_cast<int>(points_.front().size()); }
  const std::vector<Vector>& points() const { return points_; }
  const std::optional<PolyhedralCone>& recession() const { return recession_; }
  bool is_finite() const { return !recession_.has_value(); }

 private:
  std::vector<Vector> points_;
  std::optional<PolyhedralCone> recession_;
};

/// {y : <normal_i, y> >= offset_i for all i}.
struct HalfspaceSet {
  int dim = 0;
  std::vector<Vector> normals;
  std::vector<double> offsets;

  bool contains(const Vector& y, double tol = kFeasTol) const;
};

enum class CoreStatus {
  Positive,  ///< some ball r*B with r > 0 fits
  Boundary,  ///< S inside C but touching its boundary; no positive radius
  Empty,     ///< S not inside C; the *-difference misses the origin
};

struct CoreMeasure {
  double value = 0.0;   ///< sup{r > 0 : rB in C (-) S}, 0 when no r qualifies
  CoreStatus status = CoreStatus::Empty;
  double margin = 0.0;  ///< signed min_i min_s <a_i, s>
};

/// Euclidean projection onto C. Separable cones use the closed form,
/// everything else Dykstra's cyclic projections onto the halfspaces.
Vector project_onto_cone(const Vector& y, const PolyhedralCone& cone);

double dist_point_to_cone(const Vector& y, const PolyhedralCone& cone);

/// dist(y, B) for a finite B or B = points + recession.
double dist_point_to_set(const Vector& y, const GeneratorSet& set);

/// exc(A, C). A's recession cone, when present, must equal C; then
/// exc(A + C, C) = exc(A, C) and only the generators matter.
double excess(const GeneratorSet& a, const PolyhedralCone& cone);

/// exc(A, B) = sup_{a in A} dist(a, B). Supported: A finite, or both sets
/// carrying the same recession cone.
double excess(const GeneratorSet& a, const GeneratorSet& b);

double hausdorff(const GeneratorSet& a, const GeneratorSet& b);

/// C (-) S = {y : y + S in C}, exact for polyhedral C and finite S.
HalfspaceSet star_difference(const PolyhedralCone& cone, const GeneratorSet& s);

CoreMeasure core_measure(const PolyhedralCone& cone, const GeneratorSet& s);

/// T(C; y): the cone cut out by the normals active at y.
PolyhedralCone tangent_cone(const PolyhedralCone& cone, const Vector& y,
                            double active_tol = kActiveTol);

}  // namespace svilab
