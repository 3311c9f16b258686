#pragma once

// Sampled graphical derivative of Solv and its prederivative-based inner and
// outer approximations. Distances on P x X use the max-norm
// |(p, x)| = max(|p|, |x|).

#include <cstdint>
#include <string>
#include <vector>

#include "svilab/fan.hpp"
#include "svilab/region.hpp"
#include "svilab/svi_core.hpp"

namespace svilab {

struct GraphBox {
  RegionSpec p_box;
  RegionSpec x_box;
};

struct GraphDistance {
  double value = 0.0;
  bool empty = false;  ///< no graph point in the box
};

/// min over lattice q of max(|q - p|, dist(x, solv_brute(q))). Returns 0
/// immediately when (p, x) itself is feasible.
GraphDistance graph_distance(const SviProblem& prob, const Vector& p, const Vector& x,
                             const GraphBox& box);

/// liminf_{t -> 0} dist(base + t dir, graph Solv) / t on the schedule
/// t_k = t0 * 2^-k. Each evaluation scans a lattice of `resolution` steps
/// per unit of t * max(|dir_p|, |dir_x|), the radius within which the
/// feasible base point already bounds the distance.
struct MembershipOptions {
  double t0 = 0.5;
  int levels = 15;
  int tail = 5;
  double threshold = 0.05;
  int resolution = 40;
};

struct ConeMembershipVerdict {
  bool member = false;
  std::vector<double> ts;
  std::vector<double> ratios;
  double tail_min = 0.0;
  double threshold = 0.0;
};

ConeMembershipVerdict contingent_member_graph(const SviProblem& prob, const Vector& base_p,
                                              const Vector& base_x, const Vector& dir_p,
                                              const Vector& dir_x,
                                              const MembershipOptions& opts = {});

/// Unit directions in R^dim: evenly spaced angles in 2-d, {+1, -1} in 1-d,
/// seeded sphere samples otherwise.
std::vector<Vector> direction_grid(int dim, int count, std::uint64_t seed = 0);

struct GderRow {
  Vector dir;  ///< stacked (p-direction, x-direction)
  ConeMembershipVerdict verdict;
};

std::vector<GderRow> gder_sample(const SviProblem& prob, const Vector& base_p,
                                 const Vector& base_x, const std::vector<Vector>& dirs,
                                 const MembershipOptions& opts = {}, int threads = 1);

/// Every generator of H((p, v)) lies in C.
bool inner_approx_member(const FanPrederivative& joint_fan, const PolyhedralCone& cone,
                         const Vector& dir, double tol = kFeasTol);

/// For every generator y of F_base, H((p, v)) lies in T(C; y).
bool outer_approx_member(const FanPrederivative& joint_fan, const PolyhedralCone& cone,
                         const GeneratorSet& f_base, const Vector& dir,
                         double tol = kFeasTol);

struct SandwichRow {
  Vector dir;
  bool inner = false;
  bool sampled = false;
  bool outer = false;
  double min_ratio = 0.0;
};

enum class SandwichViolation { InnerNotSampled, SampledNotOuter };

struct SandwichReport {
  std::vector<SandwichRow> rows;
  std::vector<std::pair<std::size_t, SandwichViolation>> violations;
  double agreement = 0.0;  ///< fraction of rows where all three agree
  /// Recorded hypothesis: sigma_H of the exact partial fan at the base point
  /// (NaN when the cone has empty interior).
  double sigma_h_partial = 0.0;
};

SandwichReport sandwich_check(const SviProblem& prob, const Vector& base_p,
                              const Vector& base_x, const FanPrederivative& joint_fan,
                              const std::vector<Vector>& dirs,
                              const MembershipOptions& opts = {}, int threads = 1);

std::string to_string(SandwichViolation v);

}  // namespace svilab
