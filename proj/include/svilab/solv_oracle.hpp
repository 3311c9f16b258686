#pragma once

#include <map>
#include <shared_mutex>
#include <vector>

#include "svilab/svi_core.hpp"

namespace svilab {

/// Brute-force Solv(q) slices over a fixed x-box, cached by quantized q.
/// The cache is append-only; concurrent readers share it, and a slice is
/// never mutated once inserted, so returned references stay valid for the
/// oracle's lifetime.
class SolvOracle {
 public:
  SolvOracle(const SviProblem& prob, RegionSpec x_box, double tol = kFeasTol);

  const std::vector<Vector>& slice(const Vector& q) const;

  /// dist(x, solv_brute(q)); +inf for an empty slice.
  double dist(const Vector& x, const Vector& q) const;

  const RegionSpec& x_box() const { return box_; }
  std::size_t cached_slices() const;

 private:
  using Key = std::vector<long long>;
  Key key(const Vector& q) const;

  const SviProblem& prob_;
  RegionSpec box_;
  double tol_;
  mutable std::shared_mutex mu_;
  mutable std::map<Key, std::vector<Vector>> cache_;
};

}  // namespace svilab
