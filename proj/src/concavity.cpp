#include "svilab/concavity.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "svilab/errors.hpp"

namespace svilab {

namespace {

std::vector<Vector> thin(const std::vector<Vector>& pts, std::size_t max_points) {
  if (pts.size() <= max_points || max_points == 0) return pts;
  std::vector<Vector> out;
  out.reserve(max_points);
  const double stride = static_cast<double>(pts.size() - 1) / (max_points - 1);
  for (std::size_t i = 0; i < max_points; ++i) {
    out.push_back(pts[static_cast<std::size_t>(i * stride + 0.5)]);
  }
  return out;
}

}  // namespace

std::vector<Triple> random_triples(const SviProblem& prob, const Vector& pc, const Vector& xc,
                                   double radius, std::size_t count, std::uint64_t seed) {
  check_point_dims(prob, pc, xc);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> off(-radius, radius);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto around = [&](const Vector& c) {
    Vector v = c;
    for (long i = 0; i < v.size(); ++i) v[i] += off(rng);
    return v;
  };
  std::vector<Triple> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Triple tr;
    tr.p1 = around(pc);
    tr.x1 = around(xc);
    tr.p2 = around(pc);
    tr.x2 = around(xc);
    tr.t = unit(rng);
    out.push_back(std::move(tr));
  }
  return out;
}

ConcavityReport check_C_concavity(const SviProblem& prob, const std::vector<Triple>& triples,
                                  double tol) {
  ConcavityReport rep;
  rep.tol = tol;
  const auto& map = prob.map;
  for (std::size_t k = 0; k < triples.size(); ++k) {
    const auto& tr = triples[k];
    check_point_dims(prob, tr.p1, tr.x1);
    check_point_dims(prob, tr.p2, tr.x2);
    const double t = tr.t;
    const Vector pm = t * tr.p1 + (1.0 - t) * tr.p2;
    const Vector xm = t * tr.x1 + (1.0 - t) * tr.x2;

    std::vector<Vector> combo;
    const auto f1 = image_set(prob, tr.p1, tr.x1);
    const auto f2 = image_set(prob, tr.p2, tr.x2);
    for (const auto& a : f1.points()) {
      for (const auto& b : f2.points()) combo.push_back(t * a + (1.0 - t) * b);
    }
    const GeneratorSet combo_set(std::move(combo), prob.cone);

    for (std::size_t w = 0; w < map.scenario_count(); ++w) {
      const Vector mid = map.eval(pm, xm, w);
      const Vector d = mid - t * map.eval(tr.p1, tr.x1, w) - (1.0 - t) * map.eval(tr.p2, tr.x2, w);
      const double defect = dist_point_to_cone(d, prob.cone);
      ++rep.checked;
      rep.max_defect = std::max(rep.max_defect, defect);
      if (defect > tol) rep.violations.push_back({k, w, defect});
      if (dist_point_to_set(mid, combo_set) > tol) ++rep.set_inclusion_violations;
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

MeritConvexityReport check_merit_convexity(const SviProblem& prob,
                                           const std::vector<Triple>& triples, double tol) {
  MeritConvexityReport rep;
  rep.tol = tol;
  rep.max_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < triples.size(); ++k) {
    const auto& tr = triples[k];
    const double t = tr.t;
    const double mid =
        merit(prob, t * tr.p1 + (1.0 - t) * tr.p2, t * tr.x1 + (1.0 - t) * tr.x2);
    const double combo = t * merit(prob, tr.p1, tr.x1) + (1.0 - t) * merit(prob, tr.p2, tr.x2);
    const double gap = mid - combo;
    rep.max_gap = std::max(rep.max_gap, gap);
    ++rep.checked;
    if (gap > tol) rep.violations.push_back(k);
  }
  rep.passed = rep.violations.empty();
  return rep;
}

SolvConvexityReport check_solv_convexity(const SviProblem& prob, const Vector& p1,
                                         const Vector& p2, const std::vector<double>& ts,
                                         const RegionSpec& box, std::size_t max_points) {
  SolvConvexityReport rep;
  const auto s1 = thin(solv_brute(prob, p1, box), max_points);
  const auto s2 = thin(solv_brute(prob, p2, box), max_points);
  if (s1.empty() || s2.empty()) {
    rep.empty_slice = true;
    rep.passed = false;
    return rep;
  }
  for (double t : ts) {
    if (t < 0.0 || t > 1.0) throw NumericError("check_solv_convexity: t outside [0, 1]");
    const Vector pm = t * p1 + (1.0 - t) * p2;
    for (const auto& a : s1) {
      for (const auto& b : s2) {
        const Vector xm = t * a + (1.0 - t) * b;
        const double v = merit(prob, pm, xm);
        ++rep.checked;
        if (v <= kFeasTol) continue;
        ++rep.violations;
        if (!rep.worst || v > rep.worst->merit) rep.worst = SolvConvexityWitness{a, b, t, pm, xm, v};
      }
    }
  }
  rep.passed = rep.violations == 0;
  return rep;
}

}  // namespace svilab
