#include <doctest.h>

#include "odi/metrics.hpp"
#include "odi/problem.hpp"

#include <cmath>

using namespace odi;

TEST_CASE("dahlquist exact reach") {
  const Problem p = dahlquist();
  const ConvexSet r0 = p.exact_reach(0.0, make_vec({5}));
  Vec lo, hi;
  r0.bounding_box(lo, hi);
  CHECK(lo[0] == 5.0);
  CHECK(hi[0] == 5.0);
  p.exact_reach(5.0, make_vec({5})).bounding_box(lo, hi);
  CHECK(lo[0] == doctest::Approx(6 * std::exp(-5.0) - 1).epsilon(1e-14));
  CHECK(hi[0] == doctest::Approx(4 * std::exp(-5.0) + 1).epsilon(1e-14));
  CHECK(lo[0] == doctest::Approx(-0.95957).epsilon(1e-5));
  CHECK(hi[0] == doctest::Approx(1.02695).epsilon(1e-5));
  p.exact_reach(60.0, make_vec({5})).bounding_box(lo, hi);
  CHECK(lo[0] == doctest::Approx(-1.0));
  CHECK(hi[0] == doctest::Approx(1.0));
}

TEST_CASE("shipped problems satisfy their one-sided Lipschitz claims") {
  // Roundoff in the inner product is the only slack.
  CHECK(osl_violation(dahlquist(), 10.0, 5.0, 10000, 1) <= 1e-12);
  CHECK(osl_violation(nonconvex_example(), 10.0, 5.0, 10000, 2) <= 1e-9);
  CHECK(osl_violation(stiff_linear(-50, 1), 10.0, 5.0, 10000, 3) <= 1e-10);
}

TEST_CASE("shipped problems satisfy their Lipschitz claims on M") {
  CHECK(lipschitz_m_violation(dahlquist(), 5.0, 1.0, 200, 1) <= 0.0);
  CHECK(lipschitz_m_violation(nonconvex_example(), 5.0, 1.0, 200, 2) <= 0.0);
}

TEST_CASE("stiff_linear") {
  const Problem p = stiff_linear(-1.0, 1.0);
  const Problem d = dahlquist();
  const Vec x = make_vec({2.5});
  CHECK(p.f(0.0, x) == d.f(0.0, x));
  Vec lo, hi;
  stiff_linear(-3.0, 0.0).exact_reach(1.0, make_vec({2})).bounding_box(lo, hi);
  CHECK(lo[0] == doctest::Approx(2 * std::exp(-3.0)));
  CHECK(hi[0] == lo[0]);
  CHECK_THROWS_AS(stiff_linear(1.0, 1.0), Error);
  CHECK_THROWS_AS(stiff_linear(-1.0, -1.0), Error);
}

TEST_CASE("affine control images") {
  const DriftSpec drift = linear_drift(-Mat::Identity(2, 2));
  const Problem box = affine_control(
      "box", 2, drift, [](double, const Vec&) -> Mat { return Mat::Identity(2, 2); }, 0.0,
      ConvexSet::box(make_vec({-1, -1}), make_vec({1, 1})));
  const ConvexSet m = box.velocity_set(0.3, make_vec({4, 5}));
  REQUIRE(std::holds_alternative<Box>(m.variant()));
  CHECK(std::get<Box>(m.variant()).lower == make_vec({-1, -1}));
  CHECK(std::get<Box>(m.variant()).upper == make_vec({1, 1}));

  const Problem ball = affine_control(
      "uncertain", 2, drift,
      [](double, const Vec& x) -> Mat { return (1.0 + x.norm()) * Mat::Identity(2, 2); }, 1.0,
      ConvexSet::ball(make_vec({0, 0}), 1.0));
  const ConvexSet mb = ball.velocity_set(0.0, make_vec({3, 4}));
  REQUIRE(std::holds_alternative<Ball>(mb.variant()));
  CHECK(std::get<Ball>(mb.variant()).radius == doctest::Approx(6.0));

  const Problem scalar = affine_control(
      "scalar", 1, linear_drift(-Mat::Identity(1, 1)), [](double, const Vec&) -> Mat { return Mat::Constant(1, 1, 2.0); },
      0.0, ConvexSet::box(make_vec({0}), make_vec({1})));
  const ConvexSet ms = scalar.velocity_set(0.0, make_vec({0}));
  CHECK(std::get<Box>(ms.variant()).lower[0] == 0.0);
  CHECK(std::get<Box>(ms.variant()).upper[0] == 2.0);
}

TEST_CASE("affine control with a general matrix gives a polytope") {
  const Mat a = (Mat(2, 2) << 1, 1, 0, 1).finished();
  const Problem p = affine_control(
      "shear", 2, linear_drift(-Mat::Identity(2, 2)), [a](double, const Vec&) -> Mat { return a; }, 0.0,
      ConvexSet::box(make_vec({0, 0}), make_vec({1, 1})));
  const ConvexSet m = p.velocity_set(0.0, make_vec({0, 0}));
  REQUIRE(std::holds_alternative<Polytope>(m.variant()));
  CHECK(m.contains(make_vec({2, 1})));
  CHECK(m.contains(make_vec({1, 0})));
  CHECK_FALSE(m.contains(make_vec({0, 1}), 1e-9));
}

TEST_CASE("affine control rejects unsupported pairs") {
  const Mat a = (Mat(2, 2) << 1, 1, 0, 1).finished();
  CHECK_THROWS_WITH_AS(affine_control(
                           "bad", 2, linear_drift(-Mat::Identity(2, 2)), [a](double, const Vec&) -> Mat { return a; },
                           0.0, ConvexSet::ball(make_vec({0, 0}), 1.0)),
                       doctest::Contains("scalar multiple of the identity"), Error);
}

TEST_CASE("linear drift moduli") {
  const Mat f = (Mat(2, 2) << -1, 3, -3, -2).finished();
  const DriftSpec d = linear_drift(f);
  CHECK(d.osl == doctest::Approx(-1.0));
  CHECK(d.lipschitz >= 3.0);
}

TEST_CASE("attractor fixed points of the endpoint recursions") {
  for (double h : {0.5, 0.25, 0.125, 0.01}) {
    // Parameterized: y+ = (y+ + h) / (1 + h), y- = (y- - h) / (1 + h).
    CHECK((1.0 + h) / (1.0 + h) - 1.0 == 0.0);
    CHECK((-1.0 - h) / (1.0 + h) + 1.0 == 0.0);
    // Split: y+ = y+ / (1 + h) + h, fixed point 1 + h.
    const double up = 1.0 + h;
    CHECK(std::abs(up / (1.0 + h) + h - up) < 1e-15);
    CHECK(std::abs(-up / (1.0 + h) - h + up) < 1e-15);
  }
}

TEST_CASE("problem catalog") {
  CHECK(problem_by_name("dahlquist").name == "dahlquist");
  CHECK(problem_by_name("nonconvex").dim == 2);
  CHECK(problem_by_name("stiff", -20, 2).l_f(0.0) == -20.0);
  CHECK_THROWS_AS(problem_by_name("lorenz"), Error);
}
