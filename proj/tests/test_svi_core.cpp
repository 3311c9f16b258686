#include <doctest.h>

#include <cmath>
#include <thread>

#include "svilab/errors.hpp"
#include "svilab/parallel.hpp"
#include "svilab/problems.hpp"
#include "svilab/region.hpp"
#include "svilab/solv_oracle.hpp"
#include "svilab/svi_core.hpp"
#include "test_util.hpp"

using namespace svilab;
using svt::v1;
using svt::vec;

namespace {

RegionSpec box1(double center, double radius, double h) {
  RegionSpec r;
  r.center = v1(center);
  r.radius = radius;
  r.h = h;
  return r;
}

bool has_point(const std::vector<Vector>& pts, const Vector& y) {
  for (const auto& p : pts) {
    if (p.isApprox(y)) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("region") {
  TEST_CASE("grids") {
    const auto g = box_grid(v1(0.0), 1.0, 0.5);
    REQUIRE(g.size() == 5);
    CHECK(g.front()[0] == -1.0);
    CHECK(g.back()[0] == 1.0);
    CHECK(box_grid(vec({0.0, 0.0}), 1.0, 0.5).size() == 25);
    for (const auto& p : ball_grid(vec({0.0, 0.0}), 1.0, 0.25)) CHECK(p.norm() <= 1.0 + 1e-12);
    CHECK(ball_grid(v1(0.0), 1.0, 0.25).size() == 9);
    CHECK_THROWS_AS(box_grid(Vector(), 1.0, 0.1), DimensionError);
    CHECK_THROWS_AS(box_grid(v1(0.0), 1.0, 0.0), NumericError);
    CHECK_THROWS_AS(box_grid(vec({0.0, 0.0, 0.0}), 1.0, 1e-4), NumericError);
  }

  TEST_CASE("sphere samples are unit and seeded") {
    std::mt19937_64 a(5), b(5);
    const auto s1 = sample_sphere(3, 50, a);
    const auto s2 = sample_sphere(3, 50, b);
    for (std::size_t i = 0; i < s1.size(); ++i) {
      CHECK(s1[i].norm() == doctest::Approx(1.0));
      CHECK(s1[i] == s2[i]);
    }
  }

  TEST_CASE("parallel_for visits every index and rethrows") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                      if (i == 7) throw NumericError("boom");
                    }),
                    NumericError);
  }
}

TEST_SUITE("svi-core") {
  TEST_CASE("image sets") {
    const auto pe2 = paper_example(2);
    const auto f = image_set(pe2, v1(1.0), v1(0.0));
    REQUIRE(f.points().size() == 1);
    CHECK(f.points()[0].isApprox(vec({-1.0, -1.0})));
    REQUIRE(f.recession().has_value());
    CHECK(*f.recession() == PolyhedralCone::orthant(2));

    const SviProblem one("one", UncertainMap::affine(1, 1, 1, {{Matrix::Ones(1, 1), Matrix::Zero(1, 1), Vector::Zero(1)}}),
                         PolyhedralCone::orthant(1), false);
    const auto g = image_set(one, v1(0.0), v1(3.0));
    REQUIRE(g.points().size() == 1);
    CHECK(g.points()[0][0] == 3.0);

    const auto ra = image_set(robust_affine(), v1(0.0), v1(0.0));
    REQUIRE(ra.points().size() == 2);
    CHECK(ra.points()[0][0] == 0.0);
    CHECK(ra.points()[1][0] == 1.0);

    CHECK_THROWS_AS(image_set(pe2, vec({1.0, 2.0}), v1(0.0)), DimensionError);
  }

  TEST_CASE("merit values") {
    CHECK(merit(paper_example(1), v1(1.0), v1(0.0)) == doctest::Approx(1.0));
    CHECK(merit(paper_example(2), v1(1.0), v1(0.0)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(merit(paper_example(1), v1(0.0), v1(1.0)) == 0.0);
  }

  TEST_CASE("robust feasibility") {
    CHECK(is_robust_feasible(paper_example(1), v1(-1.0), v1(0.0)));
    CHECK_FALSE(is_robust_feasible(paper_example(1), v1(1.0), v1(0.0)));
    CHECK(is_robust_feasible(robust_affine(), v1(2.0), v1(1.0)));
  }

  TEST_CASE("descent") {
    const auto pe = paper_example(1);
    const auto r1 = solve_descent(pe, v1(1.0), v1(0.5));
    CHECK(r1.converged);
    CHECK(std::abs(r1.x[0]) >= 1.0 - 1e-6);
    CHECK(r1.merit <= 1e-9);
    CHECK(r1.x[0] * r1.x[0] >= 1.0 - 1e-9);

    const auto r2 = solve_descent(pe, v1(1.0), v1(2.0));
    CHECK(r2.x == v1(2.0));
    CHECK(r2.iterations == 0);

    const auto r3 = solve_descent(robust_affine(), v1(0.0), v1(5.0));
    CHECK(r3.converged);
    CHECK(r3.x[0] <= 1e-9);

    DescentOptions bad;
    bad.shrink = 1.5;
    CHECK_THROWS_AS(solve_descent(pe, v1(1.0), v1(0.5), bad), NumericError);

    DescentOptions capped;
    capped.max_iters = 0;
    const auto r4 = solve_descent(pe, v1(1.0), v1(0.5), capped);
    CHECK_FALSE(r4.converged);
  }

  TEST_CASE("solv_brute slices") {
    const auto pe = paper_example(1);
    const auto s4 = solv_brute(pe, v1(4.0), box1(0.0, 3.0, 0.01));
    REQUIRE_FALSE(s4.empty());
    for (const auto& x : s4) CHECK(std::abs(x[0]) >= 2.0 - 0.01);
    CHECK(has_point(s4, v1(2.0)));
    CHECK(has_point(s4, v1(-2.0)));
    CHECK_FALSE(has_point(s4, v1(1.98)));

    const auto all = solv_brute(pe, v1(-1.0), box1(0.0, 1.0, 0.01));
    CHECK(all.size() == box_grid(box1(0.0, 1.0, 0.01)).size());

    const auto ra = solv_brute(robust_affine(), v1(1.0), box1(0.0, 2.0, 0.01));
    for (const auto& x : ra) CHECK(x[0] <= 1.0 + 0.01);
    CHECK(ra.back()[0] == doctest::Approx(1.0));

    CHECK(solv_brute(pe, v1(100.0), box1(0.0, 1.0, 0.1)).empty());
  }

  TEST_CASE("builtin registry") {
    const auto list = list_builtins();
    bool paper = false, affine = false;
    for (const auto& b : list) {
      paper = paper || b.name == "paper-sec3-example";
      affine = affine || b.name == "robust-affine";
    }
    CHECK(paper);
    CHECK(affine);
    for (int m = 1; m <= 4; ++m) CHECK(make_builtin("paper-sec3-example", m).map.m() == m);
    CHECK_THROWS_AS(make_builtin("paper-sec3-example", 5), Error);
    CHECK_THROWS_AS(make_builtin("nope"), Error);
  }

  TEST_CASE("solv oracle caches and measures distance") {
    const auto pe = paper_example(1);
    const SolvOracle oracle(pe, box1(0.0, 2.0, 1e-3));
    CHECK(oracle.dist(v1(0.0), v1(0.25)) == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(oracle.cached_slices() == 1);
    oracle.dist(v1(0.1), v1(0.25));
    CHECK(oracle.cached_slices() == 1);
    CHECK(std::isinf(oracle.dist(v1(0.0), v1(9.0))));
  }

  TEST_CASE("solv oracle under concurrent readers") {
    const auto pe = paper_example(1);
    const SolvOracle oracle(pe, box1(0.0, 2.0, 1e-3));
    std::vector<double> out(64);
    parallel_for(out.size(), 8, [&](std::size_t i) {
      out[i] = oracle.dist(v1(0.0), v1(0.01 * static_cast<double>(i % 8 + 1)));
    });
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out[i] == doctest::Approx(std::sqrt(0.01 * static_cast<double>(i % 8 + 1))).epsilon(0.01));
    }
    CHECK(oracle.cached_slices() == 8);
  }
}

TEST_SUITE("svi-core properties") {
  TEST_CASE("merit is zero exactly on robust-feasible points") {
    svt::Gen g(21);
    for (int trial = 0; trial < 500; ++trial) {
      const auto prob = g.integer(0, 1) ? paper_example(g.integer(1, 4)) : robust_affine();
      const Vector p = v1(g.uniform(-2.0, 2.0));
      const Vector x = v1(g.uniform(-2.0, 2.0));
      CHECK((merit(prob, p, x) <= kFeasTol) == is_robust_feasible(prob, p, x));
    }
  }

  TEST_CASE("merit matches the closed forms") {
    svt::Gen g(22);
    for (int trial = 0; trial < 1000; ++trial) {
      const int m = g.integer(1, 4);
      const double p = g.uniform(-2.0, 2.0);
      const double x = g.uniform(-2.0, 2.0);
      CHECK(std::abs(merit(paper_example(m), v1(p), v1(x)) -
                     std::sqrt(double(m)) * std::max(p - x * x, 0.0)) <= 1e-12);
      CHECK(std::abs(merit(robust_affine(), v1(p), v1(x)) - std::max(0.0, x - p)) <= 1e-12);
    }
  }

  TEST_CASE("slice distance matches sqrt(p) - |x|") {
    const auto pe = paper_example(1);
    const double h = 1e-3;
    const SolvOracle oracle(pe, box1(0.0, 2.0, h));
    svt::Gen g(23);
    for (int trial = 0; trial < 200; ++trial) {
      const double p = g.uniform(0.01, 1.0);
      const double x = g.uniform(-0.99, 0.99) * std::sqrt(p);
      CHECK(std::abs(oracle.dist(v1(x), v1(p)) - (std::sqrt(p) - std::abs(x))) <= 2.0 * h);
    }
  }

  TEST_CASE("merit is continuous along segments for affine problems") {
    svt::Gen g(24);
    for (int trial = 0; trial < 50; ++trial) {
      const int m = g.integer(1, 3), np = g.integer(1, 2), nx = g.integer(1, 3);
      std::vector<AffineScenario> sc;
      double modulus = 0.0;
      for (int k = 0; k < g.integer(1, 3); ++k) {
        AffineScenario s{g.matrix(m, nx), g.matrix(m, np), g.vector(m)};
        modulus = std::max(modulus, s.A.norm() + s.B.norm());
        sc.push_back(s);
      }
      const SviProblem prob("rand", UncertainMap::affine(np, nx, m, sc), PolyhedralCone::orthant(m), false);
      const Vector p0 = g.vector(np), p1 = g.vector(np), x0 = g.vector(nx), x1 = g.vector(nx);
      const int steps = 200;
      double prev = merit(prob, p0, x0);
      for (int i = 1; i <= steps; ++i) {
        const double t = double(i) / steps;
        const Vector p = (1 - t) * p0 + t * p1, x = (1 - t) * x0 + t * x1;
        const double cur = merit(prob, p, x);
        const double step = std::max((p1 - p0).norm(), (x1 - x0).norm()) / steps;
        CHECK(std::abs(cur - prev) <= modulus * step * 2.0 + 1e-12);
        prev = cur;
      }
    }
  }

  TEST_CASE("descent trace never increases") {
    svt::Gen g(25);
    for (int trial = 0; trial < 100; ++trial) {
      const auto prob = g.integer(0, 1) ? paper_example(g.integer(1, 4)) : robust_affine();
      DescentOptions o;
      o.seed = static_cast<std::uint64_t>(trial);
      const auto res = solve_descent(prob, v1(g.uniform(-1.0, 2.0)), v1(g.uniform(-2.0, 2.0)), o);
      for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i] <= res.trace[i - 1]);
      CHECK(res.merit == res.trace.back());
    }
  }
}
