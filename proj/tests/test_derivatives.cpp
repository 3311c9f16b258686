#include <doctest.h>

#include <cmath>

#include "svilab/derivatives.hpp"
#include "svilab/errors.hpp"
#include "svilab/problems.hpp"
#include "svilab/solv_oracle.hpp"
#include "test_util.hpp"

using namespace svilab;
using svt::v1;
using svt::vec;

namespace {

GraphBox box(double pc, double xc, double radius, double h) {
  GraphBox b;
  b.p_box.center = v1(pc);
  b.p_box.radius = radius;
  b.p_box.h = h;
  b.x_box.center = v1(xc);
  b.x_box.radius = radius;
  b.x_box.h = h;
  return b;
}

bool member(const SviProblem& prob, const Vector& bp, const Vector& bx, double dp, double dx,
            const MembershipOptions& o = {}) {
  return contingent_member_graph(prob, bp, bx, v1(dp), v1(dx), o).member;
}

const Matrix kJoint = (Matrix(1, 2) << 1.0, -1.0).finished();

}  // namespace

TEST_SUITE("derivatives") {
  TEST_CASE("graph distance under the max-norm") {
    const auto pe = paper_example(1);
    const double h = 1e-3;
    for (double t : {0.01, 0.04, 0.09}) {
      // min over q of max(|q - t|, sqrt(q)) is reached where t - q = sqrt(q).
      const double exact = (-1.0 + std::sqrt(1.0 + 4.0 * t)) / 2.0;
      const auto d = graph_distance(pe, v1(t), v1(0.0), box(t, 0.0, 0.5, h));
      CHECK_FALSE(d.empty);
      CHECK(std::abs(d.value - exact) <= 2.0 * h);
      // The slice distance alone is sqrt(t).
      const SolvOracle oracle(pe, box(t, 0.0, 1.0, h).x_box);
      CHECK(std::abs(oracle.dist(v1(0.0), v1(t)) - std::sqrt(t)) <= 2.0 * h);
    }
    CHECK(graph_distance(pe, v1(1.0), v1(2.0), box(1.0, 2.0, 0.5, 0.01)).value == 0.0);
    const auto aff = graph_distance(robust_affine(), v1(0.0), v1(1.0), box(0.0, 1.0, 1.0, 1e-3));
    CHECK(aff.value == doctest::Approx(0.5).epsilon(0.005));
    const auto none = graph_distance(pe, v1(100.0), v1(0.0), box(100.0, 0.0, 1.0, 0.1));
    CHECK(none.empty);
  }

  TEST_CASE("contingent cone membership at the degenerate point") {
    const auto pe = paper_example(1);
    CHECK(member(pe, v1(0.0), v1(0.0), -1.0, 0.0));
    CHECK_FALSE(member(pe, v1(0.0), v1(0.0), 1.0, 0.0));
    CHECK(member(pe, v1(0.0), v1(0.0), 0.0, 1.0));
    const auto v = contingent_member_graph(pe, v1(0.0), v1(0.0), v1(1.0), v1(0.0));
    CHECK(v.ts.size() == 15);
    CHECK(v.ratios.size() == 15);
    CHECK(v.tail_min > v.threshold);
    CHECK_THROWS_AS(member(pe, v1(1.0), v1(0.0), 1.0, 0.0), InfeasiblePoint);
  }

  TEST_CASE("graphical derivative samples") {
    const auto aff = robust_affine();
    const auto dirs = direction_grid(2, 72);
    const auto rows = gder_sample(aff, v1(0.0), v1(0.0), dirs, {}, 4);
    for (const auto& r : rows) {
      const double q = r.dir[0], v = r.dir[1];
      if (std::abs(v - q) < 1e-9) continue;
      CHECK(r.verdict.member == (v <= q));
    }

    const auto pe = paper_example(1);
    for (const auto& r : gder_sample(pe, v1(0.0), v1(0.0), dirs)) {
      if (r.dir[0] <= 0.0) CHECK(r.verdict.member);
    }
    CHECK_FALSE(member(pe, v1(0.0), v1(0.0), 1.0, 0.0));

    // (1, 0) lies in the interior of {x <= p}.
    for (const auto& r : gder_sample(aff, v1(1.0), v1(0.0), dirs)) CHECK(r.verdict.member);
  }

  TEST_CASE("direction grids") {
    const auto d1 = direction_grid(1, 10);
    REQUIRE(d1.size() == 2);
    const auto d2 = direction_grid(2, 8);
    REQUIRE(d2.size() == 8);
    CHECK(d2[2].isApprox(vec({0.0, 1.0}), 1e-12));
    for (const auto& d : direction_grid(3, 20, 1)) CHECK(d.norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(direction_grid(0, 4), DimensionError);
  }

  TEST_CASE("inner approximation") {
    const auto o = PolyhedralCone::orthant(1);
    CHECK(inner_approx_member(FanPrederivative({kJoint}), o, vec({1.0, 0.5})));
    CHECK_FALSE(inner_approx_member(FanPrederivative({kJoint}), o, vec({0.0, 1.0})));
    CHECK(inner_approx_member(FanPrederivative({Matrix::Zero(1, 2)}), o, vec({0.0, 1.0})));
    CHECK_THROWS_AS(inner_approx_member(FanPrederivative({kJoint}), o, vec({1.0, 2.0, 3.0})),
                    DimensionError);
  }

  TEST_CASE("outer approximation") {
    const auto o = PolyhedralCone::orthant(1);
    const GeneratorSet base({v1(0.0), v1(1.0)});
    CHECK(outer_approx_member(FanPrederivative({kJoint}), o, base, vec({1.0, 0.5})));
    CHECK_FALSE(outer_approx_member(FanPrederivative({kJoint}), o, base, vec({0.0, 1.0})));
    const GeneratorSet interior({v1(0.5), v1(2.0)});
    CHECK(outer_approx_member(FanPrederivative({kJoint}), o, interior, vec({0.0, 1.0})));
    CHECK_THROWS_AS(outer_approx_member(FanPrederivative({kJoint}), o, GeneratorSet({v1(-1.0)}), vec({0.0, 1.0})),
                    InfeasiblePoint);
  }

  TEST_CASE("sandwich") {
    const auto aff = robust_affine();
    const auto dirs = direction_grid(2, 72);
    const auto tight = sandwich_check(aff, v1(0.0), v1(0.0), exact_joint_fan(aff, v1(0.0), v1(0.0)), dirs);
    CHECK(tight.violations.empty());
    CHECK(tight.agreement >= 0.98);
    CHECK(tight.sigma_h_partial == doctest::Approx(1.0));

    const auto pe = paper_example(1);
    const auto loose = sandwich_check(pe, v1(0.0), v1(0.0), FanPrederivative({Matrix::Zero(1, 2)}),
                                      {vec({1.0, 0.0})});
    REQUIRE(loose.violations.size() == 1);
    CHECK(loose.violations[0].second == SandwichViolation::InnerNotSampled);
    CHECK(to_string(SandwichViolation::InnerNotSampled) == "inner-not-sampled");

    const auto inner = sandwich_check(aff, v1(1.0), v1(0.0), exact_joint_fan(aff, v1(1.0), v1(0.0)), dirs);
    for (const auto& r : inner.rows) {
      CHECK(r.sampled);
      CHECK(r.outer);
    }
    CHECK(inner.violations.empty());
  }
}

TEST_SUITE("derivatives properties") {
  TEST_CASE("membership is positively homogeneous") {
    svt::Gen g(41);
    const auto aff = robust_affine();
    const auto pe = paper_example(1);
    for (int trial = 0; trial < 30; ++trial) {
      const Vector d = g.unit(2);
      const double t = g.uniform(0.3, 3.0);
      if (std::abs(d[1] - d[0]) < 0.05) continue;
      CHECK(member(aff, v1(0.0), v1(0.0), d[0], d[1]) == member(aff, v1(0.0), v1(0.0), t * d[0], t * d[1]));
      if (std::abs(d[0]) < 0.05) continue;
      CHECK(member(pe, v1(0.0), v1(0.0), d[0], d[1]) == member(pe, v1(0.0), v1(0.0), t * d[0], t * d[1]));
    }
  }

  TEST_CASE("inner implies outer") {
    svt::Gen g(42);
    for (int trial = 0; trial < 500; ++trial) {
      const int m = g.integer(1, 3), n = g.integer(1, 3);
      std::vector<Matrix> bundle;
      for (int k = 0; k < g.integer(1, 3); ++k) bundle.push_back(g.matrix(m, n));
      const FanPrederivative fan(bundle);
      const auto o = PolyhedralCone::orthant(m);
      std::vector<Vector> base = g.points(m, g.integer(1, 3), 0.0, 1.0);
      for (auto& b : base) {
        for (int i = 0; i < m; ++i) {
          if (g.integer(0, 2) == 0) b[i] = 0.0;
        }
      }
      const Vector dir = g.vector(n);
      if (inner_approx_member(fan, o, dir)) CHECK(outer_approx_member(fan, o, GeneratorSet(base), dir));
    }
  }

  TEST_CASE("members of a C-concave instance form a convex set along segments") {
    const auto aff = robust_affine();
    svt::Gen g(43);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const Vector a = g.unit(2), b = g.unit(2);
      if (!member(aff, v1(0.0), v1(0.0), a[0], a[1]) || !member(aff, v1(0.0), v1(0.0), b[0], b[1])) continue;
      for (double t : {0.25, 0.5, 0.75}) {
        const Vector c = t * a + (1.0 - t) * b;
        if (c.norm() < 1e-3) continue;
        CHECK(member(aff, v1(0.0), v1(0.0), c[0], c[1]));
        ++checked;
      }
    }
    CHECK(checked > 0);
  }

  TEST_CASE("a looser threshold never removes members") {
    const auto pe = paper_example(1);
    const auto dirs = direction_grid(2, 36);
    MembershipOptions tight, loose;
    tight.threshold = 0.02;
    loose.threshold = 0.2;
    const auto a = gder_sample(pe, v1(0.0), v1(0.0), dirs, tight);
    const auto b = gder_sample(pe, v1(0.0), v1(0.0), dirs, loose);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].verdict.member) CHECK(b[i].verdict.member);
    }
  }
}
