#include "svilab/problems.hpp"

#include <algorithm>
#include <cmath>

#include "svilab/errors.hpp"

namespace svilab {

SviProblem paper_example(int m) {
  if (m < 1 || m > 4) throw Error("paper-sec3-example: m must be in 1..4");
  SviProblem prob(kPaperExampleName, UncertainMap::quadratic_shift(m),
                  PolyhedralCone::orthant(m), /*recession=*/true);
  const double sqrt_m = std::sqrt(static_cast<double>(m));
  ClosedForms cf;
  cf.merit = [sqrt_m](const Vector& p, const Vector& x) {
    return sqrt_m * std::max(p[0] - x[0] * x[0], 0.0);
  };
  cf.partial_slope = [sqrt_m](const Vector& p, const Vector& x) {
    return x[0] * x[0] < p[0] ? 2.0 * sqrt_m * std::abs(x[0]) : 0.0;
  };
  cf.dist_to_solv = [](const Vector& p, const Vector& x) {
    if (p[0] <= 0.0) return 0.0;
    return std::max(std::sqrt(p[0]) - std::abs(x[0]), 0.0);
  };
  prob.closed_forms = std::move(cf);
  return prob;
}

SviProblem robust_affine() {
  std::vector<AffineScenario> scenarios;
  for (double w : {0.0, 1.0}) {
    scenarios.push_back({Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 1.0),
                         Vector::Constant(1, w)});
  }
  SviProblem prob(kRobustAffineName, UncertainMap::affine(1, 1, 1, std::move(scenarios)),
                  PolyhedralCone::orthant(1), /*recession=*/false);
  ClosedForms cf;
  cf.merit = [](const Vector& p, const Vector& x) { return std::max(x[0] - p[0], 0.0); };
  cf.partial_slope = [](const Vector& p, const Vector& x) {
    return x[0] > p[0] ? 1.0 : 0.0;
  };
  cf.dist_to_solv = [](const Vector& p, const Vector& x) {
    return std::max(x[0] - p[0], 0.0);
  };
  prob.closed_forms = std::move(cf);
  return prob;
}

std::vector<BuiltinInfo> list_builtins() {
  return {
      {kPaperExampleName, 1, 1, 1, 1, 4, true,
       "F(p,x) = (x^2-p)(1,...,1) + R^m_+ over C = R^m_+; non-concave, Solv not Aubin at (0,0)"},
      {kRobustAffineName, 1, 1, 1, 1, 1, true,
       "f(p,x,w) = -x + p + w, w in {0,1}, C = R_+; C-concave, Solv(p) = {x <= p}"},
  };
}

SviProblem make_builtin(const std::string& name, int m) {
  if (name == kPaperExampleName) return paper_example(m == 0 ? 1 : m);
  if (name == kRobustAffineName) {
    if (m != 0 && m != 1) throw Error("robust-affine: m must be 1");
    return robust_affine();
  }
  throw Error("unknown builtin problem '" + name + "'");
}

}  // namespace svilab
