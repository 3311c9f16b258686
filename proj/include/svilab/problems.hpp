#pragma once

#include <string>
#include <vector>

#include "svilab/svi_core.hpp"

namespace svilab {

inline constexpr const char* kPaperExampleName = "paper-sec3-example";
inline constexpr const char* kRobustAffineName = "robust-affine";

/// F(p, x) = (x^2 - p)(1, ..., 1) + R^m_+, C = R^m_+. Solv(p) = R for
/// p <= 0 and (-inf, -sqrt p] u [sqrt p, inf) otherwise.
SviProblem paper_example(int m = 1);

/// f(p, x, w) = -x + p + w over w in {0, 1}, C = R_+. Solv(p) = {x <= p}.
SviProblem robust_affine();

struct BuiltinInfo {
  std::string name;
  int n_p = 0;
  int n_x = 0;
  int m_default = 0;
  int m_min = 0;
  int m_max = 0;
  bool closed_forms = false;
  std::string description;
};

std::vector<BuiltinInfo> list_builtins();

/// Throws svilab::Error for an unknown name or an out-of-range m.
SviProblem make_builtin(const std::string& name, int m = 0);

}  // namespace svilab
