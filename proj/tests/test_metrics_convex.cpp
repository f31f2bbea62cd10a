#include <doctest.h>

#include "odi/convex_set.hpp"
#include "odi/metrics.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace odi;

namespace {

PointCloud interval_samples(double a, double b, double spacing) {
  PointCloud out;
  const int n = static_cast<int>(std::lround((b - a) / spacing));
  for (int i = 0; i <= n; ++i) out.push_back(make_vec({a + (b - a) * i / n}));
  return out;
}

PointCloud random_cloud(std::mt19937_64& rng, int d, int n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  PointCloud out;
  for (int k = 0; k < n; ++k) {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = g(rng);
    out.push_back(x);
  }
  return out;
}

// Nearest point of conv(V) to x by enumerating every affinely independent
// subset of at most d+1 vertices and keeping feasible barycentric solutions.
Vec brute_nearest_in_hull(const std::vector<Vec>& v, const Vec& x) {
  const int n = static_cast<int>(v.size());
  const int d = static_cast<int>(x.size());
  Vec best = v[0];
  double best_d = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    if (static_cast<int>(idx.size()) > d + 1) continue;
    const int k = static_cast<int>(idx.size());
    // minimize |v0 + sum_j c_j (v_j - v0) - x| over c.
    Eigen::MatrixXd e(d, k - 1);
    for (int j = 1; j < k; ++j) e.col(j - 1) = Eigen::VectorXd(v[idx[j]] - v[idx[0]]);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(k - 1);
    if (k > 1) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(e);
      if (lu.rank() < k - 1) continue;
      c = e.colPivHouseholderQr().solve(Eigen::VectorXd(x - v[idx[0]]));
    }
    const double c0 = 1.0 - c.sum();
    if (c0 < -1e-12 || (c.array() < -1e-12).any()) continue;
    Vec p = v[idx[0]];
    for (int j = 1; j < k; ++j) p += c[j - 1] * (v[idx[j]] - v[idx[0]]);
    const double dist = (p - x).norm();
    if (dist < best_d) {
      best_d = dist;
      best = p;
    }
  }
  return best;
}

// Dense sample of S on a fine mesh, by rejection from the bounding box.
PointCloud dense_samples(const ConvexSet& s, double spacing) {
  Vec lo, hi;
  s.bounding_box(lo, hi);
  const int d = s.dim();
  PointCloud out;
  std::vector<int> n(d), k(d, 0);
  for (int i = 0; i < d; ++i) n[i] = static_cast<int>(std::ceil((hi[i] - lo[i]) / spacing));
  while (true) {
    Vec p(d);
    for (int i = 0; i < d; ++i) p[i] = n[i] == 0 ? lo[i] : lo[i] + (hi[i] - lo[i]) * k[i] / n[i];
    if (s.contains(p, 1e-12)) out.push_back(p);
    int i = 0;
    for (; i < d; ++i) {
      if (++k[i] <= n[i]) break;
      k[i] = 0;
    }
    if (i == d) break;
  }
  for (const Vec& e : s.extreme_points()) out.push_back(e);
  return out;
}

}  // namespace

TEST_CASE("one-sided distance examples") {
  CHECK(dist_one_sided({make_vec({0}), make_vec({1})}, {make_vec({0}), make_vec({2})}) == 1.0);
  const PointCloud a{make_vec({1, 2}), make_vec({-3, 0.5})};
  CHECK(dist_one_sided(a, a) == 0.0);
  CHECK(dist_one_sided({make_vec({3, 4})}, {make_vec({0, 0})}) == 5.0);
  CHECK_THROWS_AS(dist_one_sided({}, a), EmptySetError);
  CHECK_THROWS_AS(dist_one_sided(a, {}), EmptySetError);
}

TEST_CASE("Hausdorff distance examples") {
  const double d = dist_hausdorff(interval_samples(0, 1, 0.01), interval_samples(0, 2, 0.01));
  CHECK(d == doctest::Approx(1.0).epsilon(0.01));
  const PointCloud a = interval_samples(-1, 1, 0.1);
  CHECK(dist_hausdorff(a, a) == 0.0);
  CHECK(dist_hausdorff({make_vec({0})}, {make_vec({-1}), make_vec({1})}) == 1.0);
}

TEST_CASE("pruned kernel equals brute force") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + trial % 4;
    const PointCloud a = random_cloud(rng, d, 50 + trial, 1.0);
    const PointCloud b = random_cloud(rng, d, 80 + 2 * trial, 1.5);
    CHECK(dist_one_sided(a, b) == reference::dist_one_sided(a, b));
    CHECK(dist_one_sided(b, a) == reference::dist_one_sided(b, a));
    CHECK(dist_hausdorff(a, b) == reference::dist_hausdorff(a, b));
  }
}

TEST_CASE("Hausdorff metric axioms on random clouds") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 3;
    const PointCloud a = random_cloud(rng, d, 20, 1.0);
    const PointCloud b = random_cloud(rng, d, 25, 2.0);
    const PointCloud c = random_cloud(rng, d, 15, 0.5);
    CHECK(dist_hausdorff(a, a) == 0.0);
    CHECK(dist_hausdorff(a, b) == dist_hausdorff(b, a));
    CHECK(dist_hausdorff(a, c) <= dist_hausdorff(a, b) + dist_hausdorff(b, c) + 1e-12);
  }
}

TEST_CASE("lattice diameter") {
  const GridSpec g(1.0, Vec::Zero(1));
  CHECK(diameter(LatticeSet(g, {4})) == 0.0);
  CHECK(diameter(LatticeSet(g, {0, 3})) == 3.0);
  const GridSpec g2(0.5, Vec::Zero(2));
  CHECK(diameter(LatticeSet(g2, {0, 0, 3, 4, 1, 1})) == doctest::Approx(2.5));
  CHECK_THROWS_AS(diameter(LatticeSet(g, {})), EmptySetError);
}

TEST_CASE("sample_convex examples") {
  const PointCloud a = sample_convex(ConvexSet::box(make_vec({-1}), make_vec({1})), 1.0);
  REQUIRE(a.size() == 3);
  CHECK(a[0][0] == -1.0);
  CHECK(a[1][0] == 0.0);
  CHECK(a[2][0] == 1.0);

  const PointCloud b = sample_convex(ConvexSet::ball(make_vec({0}), 0.0), 0.3);
  REQUIRE(b.size() == 1);
  CHECK(b[0][0] == 0.0);

  const ConvexSet seg = ConvexSet::box(make_vec({0, 0}), make_vec({6.5, 0}));
  const PointCloud c = sample_convex(seg, 6.5);
  bool has_lo = false;
  bool has_hi = false;
  for (const Vec& p : c) {
    has_lo |= p == make_vec({0, 0});
    has_hi |= p == make_vec({6.5, 0});
  }
  CHECK(has_lo);
  CHECK(has_hi);
  CHECK(dist_hausdorff(dense_samples(seg, 0.01), c) <= std::sqrt(2.0) / 2.0 * 6.5);

  CHECK_THROWS_AS(sample_convex(seg, 0.0), Error);
}

TEST_CASE("sample_convex accuracy for every shape") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> e(0.05, 0.8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 2;
    Vec c(d), w(d);
    for (int i = 0; i < d; ++i) {
      c[i] = u(rng);
      w[i] = 0.2 + std::abs(u(rng));
    }
    std::vector<Vec> verts;
    for (int k = 0; k < 3 + d; ++k) {
      Vec v(d);
      for (int i = 0; i < d; ++i) v[i] = u(rng);
      verts.push_back(v);
    }
    const std::vector<ConvexSet> shapes{ConvexSet::box(c - w, c + w), ConvexSet::ball(c, w[0]),
                                        ConvexSet::polytope(verts)};
    for (const ConvexSet& s : shapes) {
      const double eps = e(rng);
      const PointCloud samples = sample_convex(s, eps);
      for (const Vec& p : samples) CHECK(s.contains(p, 1e-9));
      const double r = std::sqrt(static_cast<double>(d)) / 2.0;
      CHECK(dist_hausdorff(dense_samples(s, 0.01), samples) <= r * eps + 0.01 * r + 1e-9);
    }
  }
}

TEST_CASE("sample_convex is translation equivariant") {
  const ConvexSet s = ConvexSet::ball(make_vec({0.1, -0.2}), 0.7);
  const Vec shift = make_vec({20 * 0.15, 27 * 0.15});
  const PointCloud a = sample_convex(s, 0.15);
  const PointCloud b = sample_convex(s.affine_image(shift, 1.0), 0.15);
  PointCloud moved = a;
  for (Vec& v : moved) v += shift;
  CHECK(dist_hausdorff(moved, b) < 1e-12);
}

TEST_CASE("minkowski_point_set examples") {
  const PointCloud a = minkowski_point_set(make_vec({10.0 / 3.0}), 0.5, ConvexSet::box(make_vec({-1}), make_vec({1})), 1e-3);
  double lo = 1e9;
  double hi = -1e9;
  for (const Vec& p : a) {
    lo = std::min(lo, p[0]);
    hi = std::max(hi, p[0]);
  }
  CHECK(lo == doctest::Approx(17.0 / 6.0).epsilon(1e-12));
  CHECK(hi == doctest::Approx(23.0 / 6.0).epsilon(1e-12));

  const PointCloud b = minkowski_point_set(make_vec({2.0}), 0.0, ConvexSet::box(make_vec({-1}), make_vec({1})), 0.1);
  REQUIRE(b.size() == 1);
  CHECK(b[0][0] == 2.0);

  const PointCloud c = minkowski_point_set(make_vec({0, 0}), 1.0, ConvexSet::polytope({make_vec({1, 2})}), 0.5);
  REQUIRE(c.size() == 1);
  CHECK(c[0] == make_vec({1, 2}));
}

TEST_CASE("convex set validation") {
  CHECK_THROWS_AS(ConvexSet::box(make_vec({1}), make_vec({0})), Error);
  CHECK_THROWS_AS(ConvexSet::box(make_vec({1}), make_vec({0, 1})), Error);
  CHECK_THROWS_AS(ConvexSet::ball(make_vec({0}), -1.0), Error);
  CHECK_THROWS_AS(ConvexSet::polytope({}), Error);
  CHECK_THROWS_AS(ConvexSet::polytope({make_vec({0}), make_vec({0, 1})}), Error);
}

TEST_CASE("projection onto boxes and balls") {
  const ConvexSet box = ConvexSet::box(make_vec({0, 0}), make_vec({1, 2}));
  CHECK(box.nearest(make_vec({3, -1})) == make_vec({1, 0}));
  CHECK(box.distance(make_vec({0.5, 1})) == 0.0);
  const ConvexSet ball = ConvexSet::ball(make_vec({1, 1}), 2.0);
  CHECK((ball.nearest(make_vec({1, 5})) - make_vec({1, 3})).norm() < 1e-15);
  CHECK(ball.max_norm() == doctest::Approx(std::sqrt(2.0) + 2.0));
}

TEST_CASE("min-norm-point projection equals subset enumeration") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 3;
    std::vector<Vec> verts;
    const int n = 1 + trial % 7;
    for (int k = 0; k < n; ++k) {
      Vec v(d);
      for (int i = 0; i < d; ++i) v[i] = u(rng);
      verts.push_back(v);
    }
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = 2.0 * u(rng);
    const Vec fast = nearest_in_hull(verts, x);
    const Vec slow = brute_nearest_in_hull(verts, x);
    CHECK((fast - x).norm() == doctest::Approx((slow - x).norm()).epsilon(1e-9));
    CHECK((fast - slow).norm() < 1e-7);
  }
}

TEST_CASE("polytope contains its vertices and centroid") {
  const ConvexSet tri = ConvexSet::polytope({make_vec({0, 0}), make_vec({2, 0}), make_vec({0, 2})});
  CHECK(tri.contains(make_vec({0, 0})));
  CHECK(tri.contains(tri.center()));
  CHECK(tri.distance(make_vec({2, 2})) == doctest::Approx(std::sqrt(2.0)));
}
