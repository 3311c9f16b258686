#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "svilab/region.hpp"
#include "svilab/svi_core.hpp"

namespace svilab {

/// Two points z_i = (p_i, x_i) of P x X and a weight t in [0, 1].
struct Triple {
  Vector p1, x1;
  Vector p2, x2;
  double t = 0.5;
};

/// Uniform samples in the box of half-width `radius` around (pc, xc).
std::vector<Triple> random_triples(const SviProblem& prob, const Vector& pc, const Vector& xc,
                                   double radius, std::size_t count, std::uint64_t seed);

struct ConcavityViolation {
  std::size_t triple = 0;
  std::size_t scenario = 0;
  double defect = 0.0;  ///< dist(f(z_t) - t f(z1) - (1-t) f(z2), C)
};

struct ConcavityReport {
  bool passed = true;
  std::size_t checked = 0;
  std::vector<ConcavityViolation> violations;
  /// Mid-point generators outside t F(z1) + (1-t) F(z2) + C.
  std::size_t set_inclusion_violations = 0;
  double max_defect = 0.0;
  double tol = 0.0;
};

/// Per-scenario C-concavity: f(z_t, w) - t f(z1, w) - (1-t) f(z2, w) in C.
ConcavityReport check_C_concavity(const SviProblem& prob, const std::vector<Triple>& triples,
                                  double tol = kFeasTol);

struct MeritConvexityReport {
  bool passed = true;
  std::size_t checked = 0;
  std::vector<std::size_t> violations;  ///< indices into the triple list
  double max_gap = 0.0;                 ///< max of nu(z_t) - t nu(z1) - (1-t) nu(z2)
  double tol = 0.0;
};

MeritConvexityReport check_merit_convexity(const SviProblem& prob,
                                           const std::vector<Triple>& triples,
                                           double tol = kFeasTol);

struct SolvConvexityWitness {
  Vector x1, x2;
  double t = 0.0;
  Vector p_mid;
  Vector x_mid;
  double merit = 0.0;
};

struct SolvConvexityReport {
  bool passed = true;
  bool empty_slice = false;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::optional<SolvConvexityWitness> worst;  ///< violation with the largest merit
};

/// Checks t x1 + (1-t) x2 in Solv(t p1 + (1-t) p2) for x_i in solv_brute(p_i)
/// (each slice thinned to at most max_points evenly spaced points).
SolvConvexityReport check_solv_convexity(const SviProblem& prob, const Vector& p1,
                                         const Vector& p2, const std::vector<double>& ts,
                                         const RegionSpec& box, std::size_t max_points = 256);

}  // namespace svilab
