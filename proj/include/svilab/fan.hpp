#pragma once

#include <cstdint>
#include <vector>

#include "svilab/geometry.hpp"
#include "svilab/svi_core.hpp"

namespace svilab {

enum class FanMode { Union, ConvexHull };

/// Positively homogeneous map u -> {A_1 u, ..., A_k u} generated by a
/// bundle of linear maps (or the convex hull of those images).
class FanPrederivative {
 public:
  explicit FanPrederivative(std::vector<Matrix> bundle, FanMode mode = FanMode::Union);

  int domain_dim() const { return static_cast<int>(bundle_.front().cols()); }
  int range_dim() const { return static_cast<int>(bundle_.front().rows()); }
  const std::vector<Matrix>& bundle() const { return bundle_; }
  FanMode mode() const { return mode_; }

 private:
  std::vector<Matrix> bundle_;
  FanMode mode_;
};

GeneratorSet fan_apply(const FanPrederivative& fan, const Vector& u);

/// Extreme points of the convex hull of a finite set (duplicates merged).
std::vector<Vector> hull_vertices(const std::vector<Vector>& points);

struct SigmaHResult {
  double value = 0.0;
  Vector direction;  ///< the sampled unit direction achieving the max
  int samples = 0;
  std::uint64_t seed = 0;
};

/// sup over sampled unit directions u of core(C, H(u)). The cone must have
/// nonempty interior.
SigmaHResult sigma_H(const FanPrederivative& fan, const PolyhedralCone& cone, int samples,
                     std::uint64_t seed);

/// Outer prederivative of x -> F(p, x) at (p, x): the bundle of the map's
/// x-Jacobians over the scenarios. Exact (epsilon = 0) for both builtin
/// families.
FanPrederivative exact_partial_fan(const SviProblem& prob, const Vector& p, const Vector& x);

/// Outer prederivative of (p, x) -> F(p, x); directions are stacked (p, x).
FanPrederivative exact_joint_fan(const SviProblem& prob, const Vector& p, const Vector& x);

/// exc(F(p, x), F(p, x0) + H(x - x0)) / |x - x0|: the smallest epsilon for
/// which the outer-prederivative inclusion holds at x. Sample-based, so it
/// can refute but not certify a candidate fan.
double outer_prederivative_defect(const SviProblem& prob, const FanPrederivative& partial_fan,
                                  const Vector& p, const Vector& x0, const Vector& x);

}  // namespace svilab
