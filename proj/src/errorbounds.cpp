#include "svilab/errorbounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svilab/errors.hpp"

namespace svilab {

namespace {

void require_feasible_base(const SviProblem& prob, const Vector& pbar, const Vector& xbar,
                           const char* what) {
  check_point_dims(prob, pbar, xbar);
  if (!is_robust_feasible(prob, pbar, xbar)) {
    throw InfeasiblePoint(std::string(what) + ": base point is not in graph Solv");
  }
}

RegionSpec solv_box(const Vector& xbar, double radius, double h) {
  RegionSpec box;
  box.center = xbar;
  box.radius = radius;
  box.h = h;
  return box;
}

}  // namespace

ErrorBoundReport verify_error_bound(const SviProblem& prob, const Vector& pbar,
                                    const Vector& xbar, double sigma,
                                    const ErrorBoundOptions& opts) {
  require_feasible_base(prob, pbar, xbar, "verify_error_bound");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw NumericError("verify_error_bound: sigma must be positive and finite");
  }
  const SolvOracle oracle(prob, solv_box(xbar, opts.eta + opts.solv_margin, opts.h));
  ErrorBoundReport rep;
  rep.sigma = sigma;
  rep.h = opts.h;
  const auto xs = ball_grid(xbar, opts.eta, opts.h);
  for (const auto& p : ball_grid(pbar, opts.zeta, opts.h)) {
    const auto& slice = oracle.slice(p);
    const bool meets_ball = std::any_of(slice.begin(), slice.end(), [&](const Vector& s) {
      return (s - xbar).norm() <= opts.eta * (1.0 + 1e-12);
    });
    if (!meets_ball) ++rep.empty_slices;
    for (const auto& x : xs) {
      ErrorBoundRow row{p, x};
      row.merit = merit(prob, p, x);
      row.dist = oracle.dist(x, p);
      row.ratio = row.merit > kFeasTol ? row.dist * sigma / row.merit : 0.0;
      row.violation = !(row.dist <= row.merit / sigma + 2.0 * opts.h);
      if (row.merit > kFeasTol) rep.worst_ratio = std::max(rep.worst_ratio, row.ratio);
      rep.violations += row.violation ? 1 : 0;
      rep.rows.push_back(std::move(row));
    }
  }
  rep.passed = rep.violations == 0 && rep.empty_slices == 0;
  return rep;
}

double estimate_partial_lipschitz_rate(const SviProblem& prob, const Vector& xbar, double s,
                                       const Vector& pbar, double tau, double h) {
  check_point_dims(prob, pbar, xbar);
  const auto ps = ball_grid(pbar, tau, h);
  double rate = 0.0;
  for (const auto& x : ball_grid(xbar, s, h)) {
    std::vector<GeneratorSet> images;
    images.reserve(ps.size());
    for (const auto& p : ps) images.push_back(image_set(prob, p, x));
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        rate = std::max(rate, hausdorff(images[i], images[j]) / (ps[i] - ps[j]).norm());
      }
    }
  }
  return rate;
}

AubinEstimate aubin_modulus_at(const SviProblem& prob, const Vector& pbar, const Vector& xbar,
                               double delta, double r, double p_h, const SolvOracle& oracle) {
  check_point_dims(prob, pbar, xbar);
  AubinEstimate est;
  const auto ps = ball_grid(pbar, delta, p_h);
  for (const auto& p2 : ps) {
    std::vector<const Vector*> xs;
    for (const auto& x : oracle.slice(p2)) {
      if ((x - xbar).norm() <= r * (1.0 + 1e-12)) xs.push_back(&x);
    }
    for (const auto& p1 : ps) {
      const double dp = (p1 - p2).norm();
      if (dp == 0.0) continue;
      if (oracle.slice(p1).empty()) {
        est.empty_slices = true;
        continue;
      }
      for (const Vector* x : xs) {
        ++est.pairs;
        const double k = oracle.dist(*x, p1) / dp;
        if (k > est.kappa) {
          est.kappa = k;
          est.arg_p1 = p1;
          est.arg_p2 = p2;
          est.arg_x = *x;
        }
      }
    }
  }
  return est;
}

AubinReport estimate_aubin_modulus(const SviProblem& prob, const Vector& pbar,
                                   const Vector& xbar, const AubinOptions& opts) {
  require_feasible_base(prob, pbar, xbar, "estimate_aubin_modulus");
  if (opts.steps < 1 || !(opts.shrink > 0.0 && opts.shrink < 1.0) ||
      opts.points_per_radius < 1 || !(opts.solv_h > 0.0)) {
    throw NumericError("estimate_aubin_modulus: invalid options");
  }
  AubinReport rep;
  double delta = opts.delta;
  for (int k = 0; k < opts.steps; ++k, delta *= opts.shrink) {
    const double p_h = delta / opts.points_per_radius;
    // Solv lattice step divides the parameter step so both lattices align.
    const double x_h = p_h / std::ceil(p_h / opts.solv_h - 1e-9);
    const SolvOracle oracle(prob, solv_box(xbar, opts.r + opts.solv_margin, x_h));
    const auto est = aubin_modulus_at(prob, pbar, xbar, delta, opts.r, p_h, oracle);
    rep.deltas.push_back(delta);
    rep.kappas.push_back(est.kappa);
    rep.p_steps.push_back(p_h);
    rep.empty_slices = rep.empty_slices || est.empty_slices;
  }
  rep.kappa = rep.kappas.front();
  const double first = rep.kappas.front();
  const double last = rep.kappas.back();
  rep.growth = first > 0.0 ? last / first : (last > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  bool monotone = true;
  for (std::size_t i = 1; i < rep.kappas.size(); ++i) {
    monotone = monotone && rep.kappas[i] >= rep.kappas[i - 1] * (1.0 - 1e-12);
  }
  rep.diverging = monotone && rep.growth >= opts.growth_factor;
  return rep;
}

LipLscReport check_lipschitz_lsc(const SviProblem& prob, const Vector& pbar, const Vector& xbar,
                                 double ell, double delta, double h, double solv_margin) {
  check_point_dims(prob, pbar, xbar);
  if (!(ell >= 0.0)) throw NumericError("check_lipschitz_lsc: ell must be nonnegative");
  const SolvOracle oracle(prob, solv_box(xbar, ell * delta + 2.0 * h + solv_margin, h));
  LipLscReport rep;
  for (const auto& p : ball_grid(pbar, delta, h)) {
    LipLscRow row{p};
    row.dist = oracle.dist(xbar, p);
    row.bound = ell * (p - pbar).norm() + 2.0 * h;
    row.violation = !(row.dist <= row.bound);
    rep.violations += row.violation ? 1 : 0;
    rep.rows.push_back(std::move(row));
  }
  rep.passed = rep.violations == 0;
  return rep;
}

AubinBoundReport aubin_bound_check(const SviProblem& prob, const Vector& pbar,
                                   const Vector& xbar, double ell, double sigma,
                                   const AubinOptions& opts, double tol) {
  if (!(sigma > 0.0)) throw NumericError("aubin_bound_check: sigma must be positive");
  AubinOptions single = opts;
  single.steps = 1;
  const AubinReport modulus = estimate_aubin_modulus(prob, pbar, xbar, single);
  AubinBoundReport rep;
  rep.kappa = modulus.kappa;
  rep.ell = ell;
  rep.sigma = sigma;
  rep.bound = ell / sigma;
  rep.slack = rep.bound - rep.kappa;
  rep.tol = tol;
  rep.passed = rep.kappa <= rep.bound + tol;
  return rep;
}

}  // namespace svilab
