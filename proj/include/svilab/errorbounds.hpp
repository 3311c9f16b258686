#pragma once

// Empirical checks of the parametric error bound, Aubin continuity of Solv,
// Lipschitz lower semicontinuity and the Lipschitz rate of p -> F(p, x).
// Distances to Solv(p) come from the brute lattice oracle, so every asserted
// bound carries a 2h slack for discretization.

#include <vector>

#include "svilab/solv_oracle.hpp"
#include "svilab/svi_core.hpp"

namespace svilab {

struct ErrorBoundOptions {
  double zeta = 0.5;         ///< parameter ball radius
  double eta = 0.25;         ///< decision ball radius
  double h = 0.01;
  double solv_margin = 1.0;  ///< the Solv box is B(xbar, eta + solv_margin)
};

struct ErrorBoundRow {
  Vector p;
  Vector x;
  double merit = 0.0;
  double dist = 0.0;
  double ratio = 0.0;  ///< dist * sigma / merit (0 on the graph)
  bool violation = false;
};

struct ErrorBoundReport {
  std::vector<ErrorBoundRow> rows;
  std::size_t violations = 0;
  /// Parameters whose slice misses B(xbar, eta): the nonemptiness part of
  /// the error-bound statement fails there.
  std::size_t empty_slices = 0;
  double worst_ratio = 0.0;
  double sigma = 0.0;
  double h = 0.0;
  bool passed = true;
};

/// dist(x, Solv(p)) <= nu(p, x) / sigma + 2h over B(pbar, zeta) x B(xbar, eta).
ErrorBoundReport verify_error_bound(const SviProblem& prob, const Vector& pbar,
                                    const Vector& xbar, double sigma,
                                    const ErrorBoundOptions& opts = {});

/// max over x in B(xbar, s) and p1 != p2 in B(pbar, tau) of
/// haus(F(p1, x), F(p2, x)) / |p1 - p2|.
double estimate_partial_lipschitz_rate(const SviProblem& prob, const Vector& xbar, double s,
                                       const Vector& pbar, double tau, double h);

struct AubinOptions {
  double delta = 0.25;
  double r = 0.25;
  int steps = 5;
  double shrink = 0.25;  ///< delta_{k+1} = shrink * delta_k
  int points_per_radius = 8;
  double solv_h = 1e-3;
  double solv_margin = 1.0;
  double growth_factor = 10.0;
};

struct AubinEstimate {
  double kappa = 0.0;
  bool empty_slices = false;
  std::size_t pairs = 0;
  Vector arg_p1;
  Vector arg_p2;
  Vector arg_x;
};

/// kappa(delta, r) = max over lattice p1 != p2 in B(pbar, delta) and
/// x in Solv(p2) n B(xbar, r) of dist(x, Solv(p1)) / |p1 - p2|.
AubinEstimate aubin_modulus_at(const SviProblem& prob, const Vector& pbar, const Vector& xbar,
                               double delta, double r, double p_h, const SolvOracle& oracle);

struct AubinReport {
  double kappa = 0.0;  ///< estimate at the first (largest) delta
  std::vector<double> deltas;
  std::vector<double> kappas;
  std::vector<double> p_steps;
  double growth = 1.0;  ///< kappas.back() / kappas.front()
  bool diverging = false;
  bool empty_slices = false;
};

/// kappa over the schedule delta_k = delta * shrink^k. Each step uses a
/// parameter lattice of points_per_radius steps per delta_k and a Solv
/// lattice aligned with it. Divergence: nondecreasing kappas with total
/// growth >= growth_factor.
AubinReport estimate_aubin_modulus(const SviProblem& prob, const Vector& pbar,
                                   const Vector& xbar, const AubinOptions& opts = {});

struct LipLscRow {
  Vector p;
  double dist = 0.0;
  double bound = 0.0;
  bool violation = false;
};

struct LipLscReport {
  std::vector<LipLscRow> rows;
  std::size_t violations = 0;
  bool passed = true;
};

/// Solv(p) meets B(xbar, ell |p - pbar| + 2h) for lattice p in B(pbar, delta).
LipLscReport check_lipschitz_lsc(const SviProblem& prob, const Vector& pbar, const Vector& xbar,
                                 double ell, double delta, double h, double solv_margin = 1.0);

struct AubinBoundReport {
  double kappa = 0.0;
  double ell = 0.0;
  double sigma = 0.0;
  double bound = 0.0;  ///< ell / sigma
  double slack = 0.0;  ///< bound - kappa
  double tol = 0.0;
  bool passed = false;
};

/// kappa(delta, r) <= ell / sigma + tol at the default (delta, r).
AubinBoundReport aubin_bound_check(const SviProblem& prob, const Vector& pbar,
                                   const Vector& xbar, double ell, double sigma,
                                   const AubinOptions& opts = {}, double tol = 0.05);

}  // namespace svilab
