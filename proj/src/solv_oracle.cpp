#include "svilab/solv_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <mutex>

#include "svilab/errors.hpp"

namespace svilab {

SolvOracle::SolvOracle(const SviProblem& prob, RegionSpec x_box, double tol)
    : prob_(prob), box_(std::move(x_box)), tol_(tol) {
  box_.validate();
  require_same_dim(box_.center.size(), prob_.map.n_x(), "SolvOracle box");
}

SolvOracle::Key SolvOracle::key(const Vector& q) const {
  Key k(q.size());
  for (long i = 0; i < q.size(); ++i) k[i] = std::llround(q[i] * 1e12);
  return k;
}

const std::vector<Vector>& SolvOracle::slice(const Vector& q) const {
  require_same_dim(q.size(), prob_.map.n_p(), "SolvOracle parameter");
  const Key k = key(q);
  {
    std::shared_lock lock(mu_);
    if (auto it = cache_.find(k); it != cache_.end()) return it->second;
  }
  auto pts = solv_brute(prob_, q, box_, tol_);
  std::unique_lock lock(mu_);
  return cache_.try_emplace(k, std::move(pts)).first->second;
}

double SolvOracle::dist(const Vector& x, const Vector& q) const {
  const auto& pts = slice(q);
  if (x.size() != 1 || pts.empty()) return dist_to_points(x, pts);
  // 1-d slices come out of the lattice scan in ascending order.
  const auto it = std::lower_bound(pts.begin(), pts.end(), x[0],
                                   [](const Vector& a, double v) { return a[0] < v; });
  double best = std::numeric_limits<double>::infinity();
  if (it != pts.end()) best = (*it)[0] - x[0];
  if (it != pts.begin()) best = std::min(best, x[0] - (*std::prev(it))[0]);
  return best;
}

std::size_t SolvOracle::cached_slices() const {
  std::shared_lock lock(mu_);
  return cache_.size();
}

}  // namespace svilab
