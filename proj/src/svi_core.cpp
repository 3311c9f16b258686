#include "svilab/svi_core.hpp"

#include <algorithm>
#include <cmath>

#include "svilab/errors.hpp"

namespace svilab {

UncertainMap::UncertainMap(MapKind kind, int n_p, int n_x, int m,
                           std::vector<AffineScenario> scenarios)
    : kind_(kind), n_p_(n_p), n_x_(n_x), m_(m), scenarios_(std::move(scenarios)) {
  if (n_p_ <= 0 || n_x_ <= 0 || m_ <= 0) {
    throw DimensionError("UncertainMap: dimensions must be positive");
  }
}

UncertainMap UncertainMap::affine(int n_p, int n_x, int m,
                                  std::vector<AffineScenario> scenarios) {
  if (scenarios.empty()) throw DimensionError("UncertainMap: empty scenario list");
  for (const auto& s : scenarios) {
    if (s.A.rows() != m || s.A.cols() != n_x || s.B.rows() != m || s.B.cols() != n_p ||
        s.c.size() != m) {
      throw DimensionError("UncertainMap: affine scenario has wrong shape");
    }
    if (!s.A.allFinite() || !s.B.allFinite() || !s.c.allFinite()) {
      throw NumericError("UncertainMap: non-finite scenario data");
    }
  }
  return UncertainMap(MapKind::Affine, n_p, n_x, m, std::move(scenarios));
}

UncertainMap UncertainMap::quadratic_shift(int m) {
  return UncertainMap(MapKind::QuadraticShift, 1, 1, m, {});
}

std::size_t UncertainMap::scenario_count() const {
  return kind_ == MapKind::Affine ? scenarios_.size() : 1;
}

Vector UncertainMap::eval(const Vector& p, const Vector& x, std::size_t scenario) const {
  switch (kind_) {
    case MapKind::Affine: {
      const auto& s = scenarios_.at(scenario);
      return s.A * x + s.B * p + s.c;
    }
    case MapKind::QuadraticShift:
      return Vector::Constant(m_, x.squaredNorm() - p[0]);
  }
  return {};
}

SviProblem::SviProblem(std::string name_, UncertainMap map_, PolyhedralCone cone_,
                       bool recession_)
    : name(std::move(name_)), map(std::move(map_)), cone(std::move(cone_)),
      recession(recession_) {
  require_same_dim(cone.dim(), map.m(), "SviProblem cone");
}

void check_point_dims(const SviProblem& prob, const Vector& p, const Vector& x) {
  require_same_dim(p.size(), prob.map.n_p(), "parameter");
  require_same_dim(x.size(), prob.map.n_x(), "decision variable");
}

GeneratorSet image_set(const SviProblem& prob, const Vector& p, const Vector& x) {
  check_point_dims(prob, p, x);
  std::vector<Vector> pts;
  pts.reserve(prob.map.scenario_count());
  for (std::size_t w = 0; w < prob.map.scenario_count(); ++w) {
    pts.push_back(prob.map.eval(p, x, w));
  }
  if (prob.recession) return GeneratorSet(std::move(pts), prob.cone);
  return GeneratorSet(std::move(pts));
}

double merit(const SviProblem& prob, const Vector& p, const Vector& x) {
  check_point_dims(prob, p, x);
  // Same value as excess(image_set(p, x), C) without building the set.
  double worst = 0.0;
  for (std::size_t w = 0; w < prob.map.scenario_count(); ++w) {
    const Vector y = prob.map.eval(p, x, w);
    if (!y.allFinite()) throw NumericError("merit: non-finite image point");
    worst = std::max(worst, dist_point_to_cone(y, prob.cone));
  }
  return worst;
}

bool is_robust_feasible(const SviProblem& prob, const Vector& p, const Vector& x,
                        double tol) {
  return merit(prob, p, x) <= tol;
}

void DescentOptions::validate() const {
  if (!(step0 > 0.0)) throw NumericError("DescentOptions: step0 must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw NumericError("DescentOptions: shrink not in (0,1)");
  if (!(feas_tol > 0.0)) throw NumericError("DescentOptions: feas_tol must be positive");
  if (max_iters < 0) throw NumericError("DescentOptions: negative max_iters");
}

DescentResult solve_descent(const SviProblem& prob, const Vector& p, const Vector& x0,
                            const DescentOptions& opts) {
  opts.validate();
  check_point_dims(prob, p, x0);
  DescentResult res;
  res.x = x0;
  res.merit = merit(prob, p, x0);
  res.trace.push_back(res.merit);
  if (!std::isfinite(res.merit)) throw NumericError("solve_descent: merit not finite at x0");
  if (res.merit <= opts.feas_tol) {
    res.converged = true;
    return res;
  }

  const int n = prob.map.n_x();
  std::mt19937_64 rng(opts.seed);
  const int k = opts.directions > 0 ? opts.directions : 16 * n;
  // Coordinate directions first, then random ones.
  std::vector<Vector> dirs;
  for (int i = 0; i < n; ++i) {
    dirs.push_back(Vector::Unit(n, i));
    dirs.push_back(-Vector::Unit(n, i));
  }
  for (auto& d : sample_sphere(n, k, rng)) dirs.push_back(std::move(d));

  double step = opts.step0;
  while (res.iterations < opts.max_iters && step >= opts.min_step) {
    ++res.iterations;
    bool improved = false;
    for (const auto& d : dirs) {
      const Vector cand = res.x + step * d;
      const double v = merit(prob, p, cand);
      if (v < res.merit) {
        res.x = cand;
        res.merit = v;
        res.trace.push_back(v);
        improved = true;
        break;
      }
    }
    if (res.merit <= opts.feas_tol) {
      res.converged = true;
      return res;
    }
    step = improved ? 2.0 * step : step * opts.shrink;
  }
  return res;
}

std::vector<Vector> solv_brute(const SviProblem& prob, const Vector& p, const RegionSpec& box,
                               double tol) {
  require_same_dim(box.center.size(), prob.map.n_x(), "solv_brute box");
  std::vector<Vector> out;
  for (auto& x : box_grid(box)) {
    if (merit(prob, p, x) <= tol) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace svilab
