#pragma once

// Numerical strong slopes and the regularity constants built on them.

#include <cstdint>
#include <functional>
#include <vector>

#include "svilab/fan.hpp"
#include "svilab/region.hpp"
#include "svilab/svi_core.hpp"

namespace svilab {

using ScalarField = std::function<double(const Vector&)>;

/// Geometric radii r_k = r0 * 2^-k, k = 0 .. levels-1. The reported slope is
/// the max over the `tail` smallest radii.
struct RadiusSchedule {
  double r0 = 0.1;
  int levels = 13;
  int tail = 3;

  std::vector<double> radii() const;
};

struct SlopeOptions {
  RadiusSchedule schedule;
  int directions = 0;  ///< 0 means 64 * dim
  std::uint64_t seed = 0;
};

struct SlopeEstimate {
  double value = 0.0;
  std::vector<double> radii;
  std::vector<double> per_radius;  ///< sup of (phi(x0) - phi(x))^+ / r on each sphere
  bool converged = false;          ///< tail spread within 5% of the value
  int directions = 0;
  std::uint64_t seed = 0;
};

SlopeEstimate strong_slope(const ScalarField& phi, const Vector& x0,
                           const SlopeOptions& opts = {});

/// Strong slope of x -> nu(p0, x) at x0.
SlopeEstimate partial_strong_slope(const SviProblem& prob, const Vector& p0, const Vector& x0,
                                   const SlopeOptions& opts = {});

struct SigmaNablaOptions {
  double delta2 = 0.5;
  double h = 0.05;
  double feas_tol = kFeasTol;
  SlopeOptions slope;
  int threads = 1;
};

struct SigmaNablaResult {
  double value = 0.0;  ///< +inf when the grid has no point off the graph
  bool empty = false;
  Vector witness_p;
  Vector witness_x;
  std::size_t grid_points = 0;
  std::size_t off_graph_points = 0;
};

/// min of the partial strong slope over grid points of
/// B(pbar, delta2) x B(xbar, delta2) with nu > feas_tol.
SigmaNablaResult sigma_nabla(const SviProblem& prob, const Vector& pbar, const Vector& xbar,
                             const SigmaNablaOptions& opts = {});

using FanProvider = std::function<FanPrederivative(const Vector& p, const Vector& x)>;

struct SlopeBoundOptions {
  double radius = 0.5;
  double h = 0.1;
  double tol_slope = 0.02;  ///< relative to max(1, sigma_H)
  int sigma_samples = 256;
  SlopeOptions slope;
  std::uint64_t seed = 0;
};

struct SlopeBoundRow {
  Vector p;
  Vector x;
  double slope = 0.0;
  double sigma_h = 0.0;
  bool violation = false;
};

struct SlopeBoundReport {
  std::vector<SlopeBoundRow> rows;  ///< off-graph points only
  std::size_t violations = 0;
  double min_margin = 0.0;  ///< min of slope - sigma_H
  double tol = 0.0;
};

/// At every off-graph grid point of the region around (pbar, xbar), checks
/// that the slope estimate of nu(p, .) is >= sigma_H of the supplied partial
/// outer prederivative, up to tol_slope. Violations are data.
SlopeBoundReport check_slope_geq_sigmaH(const SviProblem& prob, const FanProvider& partial_fan,
                                        const Vector& pbar, const Vector& xbar,
                                        const SlopeBoundOptions& opts = {});

}  // namespace svilab
