#pragma once

// Parameterized set-valued inclusions F(p, x) in C, where
// F(p, x) = {f(p, x, w) : w in Omega} over a finite scenario list, possibly
// with the recession cone C attached to every image set.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "svilab/geometry.hpp"
#include "svilab/region.hpp"

namespace svilab {

/// One scenario of the affine family f(p, x, w) = A x + B p + c.
struct AffineScenario {
  Matrix A;  ///< m x n_x
  Matrix B;  ///< m x n_p
  Vector c;  ///< m
};

enum class MapKind {
  Affine,
  QuadraticShift,  ///< f(p, x) = (|x|^2 - p_1) (1, ..., 1)
};

class UncertainMap {
 public:
  static UncertainMap affine(int n_p, int n_x, int m, std::vector<AffineScenario> scenarios);
  static UncertainMap quadratic_shift(int m);

  Vector eval(const Vector& p, const Vector& x, std::size_t scenario) const;

  MapKind kind() const { return kind_; }
  int n_p() const { return n_p_; }
  int n_x() const { return n_x_; }
  int m() const { return m_; }
  std::size_t scenario_count() const;
  const std::vector<AffineScenario>& affine_scenarios() const { return scenarios_; }

 private:
  UncertainMap(MapKind kind, int n_p, int n_x, int m, std::vector<AffineScenario> scenarios);

  MapKind kind_;
  int n_p_;
  int n_x_;
  int m_;
  std::vector<AffineScenario> scenarios_;
};

/// Reference formulas attached to builtins, used to cross-check the generic
/// generator-set path.
struct ClosedForms {
  std::function<double(const Vector& p, const Vector& x)> merit;
  std::function<double(const Vector& p, const Vector& x)> partial_slope;
  std::function<double(const Vector& p, const Vector& x)> dist_to_solv;
};

struct SviProblem {
  SviProblem(std::string name, UncertainMap map, PolyhedralCone cone, bool recession);

  std::string name;
  UncertainMap map;
  PolyhedralCone cone;
  bool recession = false;  ///< image sets carry the recession cone C
  std::optional<ClosedForms> closed_forms;
};

GeneratorSet image_set(const SviProblem& prob, const Vector& p, const Vector& x);

/// nu(p, x) = exc(F(p, x), C).
double merit(const SviProblem& prob, const Vector& p, const Vector& x);

bool is_robust_feasible(const SviProblem& prob, const Vector& p, const Vector& x,
                        double tol = kFeasTol);

struct DescentOptions {
  double step0 = 1.0;
  double shrink = 0.5;
  double min_step = 1e-12;
  int max_iters = 500;
  double feas_tol = kFeasTol;
  int directions = 0;  ///< 0 means 16 * n_x
  std::uint64_t seed = 0;

  void validate() const;
};

struct DescentResult {
  Vector x;
  double merit = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> trace;  ///< merit after each accepted step, starting at x0
};

/// Derivative-free pattern search on x -> nu(p, x): sampled unit directions,
/// first improving direction wins, step doubles on success and shrinks when
/// no direction improves.
DescentResult solve_descent(const SviProblem& prob, const Vector& p, const Vector& x0,
                            const DescentOptions& opts = {});

/// Every lattice point of the box with nu(p, x) <= tol.
std::vector<Vector> solv_brute(const SviProblem& prob, const Vector& p, const RegionSpec& box,
                               double tol = kFeasTol);

void check_point_dims(const SviProblem& prob, const Vector& p, const Vector& x);

}  // namespace svilab
