#include "svilab/derivatives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "svilab/errors.hpp"
#include "svilab/parallel.hpp"

namespace svilab {

namespace {

std::vector<std::size_t> order_by_distance(const std::vector<Vector>& pts, const Vector& from,
                                           std::vector<double>& dist) {
  dist.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) dist[i] = (pts[i] - from).norm();
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  return idx;
}

// Max-norm distance from (p, x) to the feasible lattice points of qs x xs,
// never above `upper`. Both loops walk outward, so the first feasible x in a
// slice is the nearest one and whole slices are skipped once |q - p| alone
// exceeds the incumbent.
double scan_graph(const SviProblem& prob, const Vector& p, const Vector& x,
                  const std::vector<Vector>& qs, const std::vector<Vector>& xs, double upper) {
  std::vector<double> dq;
  std::vector<double> dx;
  const auto q_order = order_by_distance(qs, p, dq);
  const auto x_order = order_by_distance(xs, x, dx);
  double best = upper;
  for (std::size_t qi : q_order) {
    if (dq[qi] >= best) break;
    for (std::size_t xi : x_order) {
      const double d = std::max(dq[qi], dx[xi]);
      if (d >= best) break;
      if (is_robust_feasible(prob, qs[qi], xs[xi])) {
        best = d;
        break;
      }
    }
  }
  return best;
}

void split_direction(const SviProblem& prob, const Vector& dir, Vector& dp, Vector& dx) {
  require_same_dim(dir.size(), prob.map.n_p() + prob.map.n_x(), "direction");
  dp = dir.head(prob.map.n_p());
  dx = dir.tail(prob.map.n_x());
}

}  // namespace

GraphDistance graph_distance(const SviProblem& prob, const Vector& p, const Vector& x,
                             const GraphBox& box) {
  check_point_dims(prob, p, x);
  require_same_dim(box.p_box.center.size(), prob.map.n_p(), "graph_distance p-box");
  require_same_dim(box.x_box.center.size(), prob.map.n_x(), "graph_distance x-box");
  if (is_robust_feasible(prob, p, x)) return {0.0, false};
  const double d = scan_graph(prob, p, x, box_grid(box.p_box), box_grid(box.x_box),
                              std::numeric_limits<double>::infinity());
  return {d, !std::isfinite(d)};
}

ConeMembershipVerdict contingent_member_graph(const SviProblem& prob, const Vector& base_p,
                                              const Vector& base_x, const Vector& dir_p,
                                              const Vector& dir_x,
                                              const MembershipOptions& opts) {
  check_point_dims(prob, base_p, base_x);
  check_point_dims(prob, dir_p, dir_x);
  if (!is_robust_feasible(prob, base_p, base_x)) {
    throw InfeasiblePoint("contingent_member_graph: base point is not in graph Solv");
  }
  if (opts.levels < 1 || opts.tail < 1 || opts.tail > opts.levels || !(opts.t0 > 0.0) ||
      opts.resolution < 1) {
    throw NumericError("contingent_member_graph: invalid schedule");
  }
  ConeMembershipVerdict v;
  v.threshold = opts.threshold;
  const double len = std::max(dir_p.norm(), dir_x.norm());
  for (int k = 0; k < opts.levels; ++k) {
    const double t = std::ldexp(opts.t0, -k);
    v.ts.push_back(t);
    const Vector p = base_p + t * dir_p;
    const Vector x = base_x + t * dir_x;
    if (len == 0.0 || is_robust_feasible(prob, p, x)) {
      v.ratios.push_back(0.0);
      continue;
    }
    const double reach = t * len;
    const double h = reach / opts.resolution;
    const double d =
        scan_graph(prob, p, x, box_grid(p, reach, h), box_grid(x, reach, h), reach);
    v.ratios.push_back(d / reach);
  }
  v.tail_min = *std::min_element(v.ratios.end() - opts.tail, v.ratios.end());
  v.member = v.tail_min <= opts.threshold;
  return v;
}

std::vector<Vector> direction_grid(int dim, int count, std::uint64_t seed) {
  if (dim <= 0 || count <= 0) throw DimensionError("direction_grid: bad dimension or count");
  if (dim == 1) return {Vector::Constant(1, 1.0), Vector::Constant(1, -1.0)};
  std::vector<Vector> out;
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * k / count;
      Vector u(2);
      u << std::cos(a), std::sin(a);
      out.push_back(u);
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  return sample_sphere(dim, count, rng);
}

std::vector<GderRow> gder_sample(const SviProblem& prob, const Vector& base_p,
                                 const Vector& base_x, const std::vector<Vector>& dirs,
                                 const MembershipOptions& opts, int threads) {
  std::vector<GderRow> rows(dirs.size());
  parallel_for(dirs.size(), threads, [&](std::size_t i) {
    Vector dp;
    Vector dx;
    split_direction(prob, dirs[i], dp, dx);
    rows[i] = {dirs[i], contingent_member_graph(prob, base_p, base_x, dp, dx, opts)};
  });
  return rows;
}

bool inner_approx_member(const FanPrederivative& joint_fan, const PolyhedralCone& cone,
                         const Vector& dir, double tol) {
  require_same_dim(joint_fan.range_dim(), cone.dim(), "inner_approx_member");
  const auto img = fan_apply(joint_fan, dir);
  return std::all_of(img.points().begin(), img.points().end(),
                     [&](const Vector& y) { return cone.contains(y, tol); });
}

bool outer_approx_member(const FanPrederivative& joint_fan, const PolyhedralCone& cone,
                         const GeneratorSet& f_base, const Vector& dir, double tol) {
  require_same_dim(joint_fan.range_dim(), cone.dim(), "outer_approx_member");
  require_same_dim(f_base.dim(), cone.dim(), "outer_approx_member base set");
  const auto img = fan_apply(joint_fan, dir);
  for (const auto& y : f_base.points()) {
    if (!cone.contains(y, kFeasTol)) {
      throw InfeasiblePoint("outer_approx_member: base image set is not inside C");
    }
    const PolyhedralCone tc = tangent_cone(cone, y);
    for (const auto& w : img.points()) {
      if (!tc.contains(w, tol)) return false;
    }
  }
  return true;
}

SandwichReport sandwich_check(const SviProblem& prob, const Vector& base_p,
                              const Vector& base_x, const FanPrederivative& joint_fan,
                              const std::vector<Vector>& dirs, const MembershipOptions& opts,
                              int threads) {
  require_same_dim(joint_fan.domain_dim(), prob.map.n_p() + prob.map.n_x(),
                   "sandwich_check joint fan");
  SandwichReport rep;
  rep.sigma_h_partial = prob.cone.interior_witness()
                            ? sigma_H(exact_partial_fan(prob, base_p, base_x), prob.cone,
                                      256, 0)
                                  .value
                            : std::numeric_limits<double>::quiet_NaN();
  const GeneratorSet f_base = image_set(prob, base_p, base_x);
  const auto sampled = gder_sample(prob, base_p, base_x, dirs, opts, threads);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    SandwichRow row;
    row.dir = dirs[i];
    row.inner = inner_approx_member(joint_fan, prob.cone, dirs[i]);
    row.sampled = sampled[i].verdict.member;
    row.outer = outer_approx_member(joint_fan, prob.cone, f_base, dirs[i]);
    row.min_ratio = sampled[i].verdict.tail_min;
    if (row.inner && !row.sampled) {
      rep.violations.emplace_back(i, SandwichViolation::InnerNotSampled);
    }
    if (row.sampled && !row.outer) {
      rep.violations.emplace_back(i, SandwichViolation::SampledNotOuter);
    }
    if (row.inner == row.sampled && row.sampled == row.outer) ++agree;
    rep.rows.push_back(std::move(row));
  }
  rep.agreement = dirs.empty() ? 1.0 : static_cast<double>(agree) / dirs.size();
  return rep;
}

std::string to_string(SandwichViolation v) {
  return v == SandwichViolation::InnerNotSampled ? "inner-not-sampled" : "sampled-not-outer";
}

}  // namespace svilab
