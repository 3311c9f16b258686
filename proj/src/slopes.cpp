#include "svilab/slopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "svilab/errors.hpp"
#include "svilab/parallel.hpp"

namespace svilab {

std::vector<double> RadiusSchedule::radii() const {
  if (!(r0 > 0.0) || levels < 1 || tail < 1 || tail > levels) {
    throw NumericError("RadiusSchedule: invalid schedule");
  }
  std::vector<double> out;
  for (int k = 0; k < levels; ++k) out.push_back(std::ldexp(r0, -k));
  return out;
}

SlopeEstimate strong_slope(const ScalarField& phi, const Vector& x0, const SlopeOptions& opts) {
  const double f0 = phi(x0);
  if (!std::isfinite(f0)) throw NumericError("strong_slope: phi is not finite at x0");
  const int dim = static_cast<int>(x0.size());
  SlopeEstimate est;
  est.radii = opts.schedule.radii();
  est.directions = opts.directions > 0 ? opts.directions : 64 * dim;
  est.seed = opts.seed;
  std::mt19937_64 rng(opts.seed);
  const auto dirs = sample_sphere(dim, est.directions, rng);

  for (double r : est.radii) {
    double sup = 0.0;
    for (const auto& u : dirs) {
      const double f = phi(x0 + r * u);
      if (!std::isfinite(f)) throw NumericError("strong_slope: phi is not finite near x0");
      sup = std::max(sup, (f0 - f) / r);
    }
    est.per_radius.push_back(sup);
  }
  const auto tail_begin = est.per_radius.end() - opts.schedule.tail;
  const auto [lo, hi] = std::minmax_element(tail_begin, est.per_radius.end());
  est.value = *hi;
  est.converged = (*hi - *lo) <= 0.05 * est.value + 1e-3;
  return est;
}

SlopeEstimate partial_strong_slope(const SviProblem& prob, const Vector& p0, const Vector& x0,
                                   const SlopeOptions& opts) {
  check_point_dims(prob, p0, x0);
  return strong_slope([&](const Vector& x) { return merit(prob, p0, x); }, x0, opts);
}

SigmaNablaResult sigma_nabla(const SviProblem& prob, const Vector& pbar, const Vector& xbar,
                             const SigmaNablaOptions& opts) {
  check_point_dims(prob, pbar, xbar);
  const auto ps = ball_grid(pbar, opts.delta2, opts.h);
  const auto xs = ball_grid(xbar, opts.delta2, opts.h);

  struct Candidate {
    std::size_t ip;
    std::size_t ix;
  };
  std::vector<Candidate> off_graph;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (merit(prob, ps[i], xs[j]) > opts.feas_tol) off_graph.push_back({i, j});
    }
  }

  SigmaNablaResult res;
  res.grid_points = ps.size() * xs.size();
  res.off_graph_points = off_graph.size();
  if (off_graph.empty()) {
    res.value = std::numeric_limits<double>::infinity();
    res.empty = true;
    return res;
  }
  std::vector<double> slopes(off_graph.size());
  parallel_for(off_graph.size(), opts.threads, [&](std::size_t k) {
    const auto& c = off_graph[k];
    slopes[k] = partial_strong_slope(prob, ps[c.ip], xs[c.ix], opts.slope).value;
  });
  const auto best = std::min_element(slopes.begin(), slopes.end()) - slopes.begin();
  res.value = slopes[best];
  res.witness_p = ps[off_graph[best].ip];
  res.witness_x = xs[off_graph[best].ix];
  return res;
}

SlopeBoundReport check_slope_geq_sigmaH(const SviProblem& prob, const FanProvider& partial_fan,
                                        const Vector& pbar, const Vector& xbar,
                                        const SlopeBoundOptions& opts) {
  check_point_dims(prob, pbar, xbar);
  SlopeBoundReport rep;
  rep.tol = opts.tol_slope;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& p : ball_grid(pbar, opts.radius, opts.h)) {
    for (const auto& x : ball_grid(xbar, opts.radius, opts.h)) {
      if (merit(prob, p, x) <= kFeasTol) continue;
      SlopeBoundRow row{p, x};
      row.slope = partial_strong_slope(prob, p, x, opts.slope).value;
      row.sigma_h = sigma_H(partial_fan(p, x), prob.cone, opts.sigma_samples, opts.seed).value;
      const double margin = row.slope - row.sigma_h;
      row.violation = margin < -opts.tol_slope * std::max(1.0, row.sigma_h);
      rep.violations += row.violation ? 1 : 0;
      rep.min_margin = std::min(rep.min_margin, margin);
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

}  // namespace svilab
