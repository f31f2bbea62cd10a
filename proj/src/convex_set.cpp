#include "odi/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace odi {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

void sort_unique_points(PointCloud& pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return a == b; }), pts.end());
}

// Sorted axis values {c + k*eps} clipped to [lo, hi], plus both endpoints.
std::vector<double> axis_mesh(double lo, double hi, double c, double eps) {
  std::vector<double> vals{lo, hi};
  const double half = 0.5 * (hi - lo);
  const auto kmax = static_cast<std::int64_t>(std::floor(half / eps));
  for (std::int64_t k = -kmax; k <= kmax; ++k) {
    vals.push_back(std::clamp(c + eps * static_cast<double>(k), lo, hi));
  }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

PointCloud sample_box(const Box& b, double eps) {
  const int d = static_cast<int>(b.lower.size());
  std::vector<std::vector<double>> axes;
  axes.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    axes.push_back(axis_mesh(b.lower[i], b.upper[i], 0.5 * (b.lower[i] + b.upper[i]), eps));
  }
  PointCloud out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  for (;;) {
    Vec p(d);
    for (int i = 0; i < d; ++i) p[i] = axes[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
    out.push_back(p);
    int axis = 0;
    while (axis < d && idx[static_cast<std::size_t>(axis)] + 1 == axes[static_cast<std::size_t>(axis)].size()) {
      idx[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == d) break;
    ++idx[static_cast<std::size_t>(axis)];
  }
  return out;
}

// Projects every mesh point within sqrt(d)/2*eps of S onto S.
PointCloud sample_by_projection(const ConvexSet& s, double eps) {
  const int d = s.dim();
  const double r = 0.5 * std::sqrt(static_cast<double>(d)) * eps;
  const Vec c = s.center();
  Vec lo;
  Vec hi;
  s.bounding_box(lo, hi);
  std::vector<std::int64_t> klo(static_cast<std::size_t>(d));
  std::vector<std::int64_t> khi(static_cast<std::size_t>(d));
  std::vector<std::int64_t> k(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    klo[ui] = static_cast<std::int64_t>(std::ceil((lo[i] - c[i] - r) / eps));
    khi[ui] = static_cast<std::int64_t>(std::floor((hi[i] - c[i] + r) / eps));
    if (klo[ui] > khi[ui]) klo[ui] = khi[ui] = 0;
    k[ui] = klo[ui];
  }
  PointCloud out = s.extreme_points();
  for (;;) {
    Vec q(d);
    for (int i = 0; i < d; ++i) q[i] = c[i] + eps * static_cast<double>(k[static_cast<std::size_t>(i)]);
    const Vec p = s.nearest(q);
    if ((p - q).norm() <= r) out.push_back(p);
    int axis = 0;
    while (axis < d && k[static_cast<std::size_t>(axis)] == khi[static_cast<std::size_t>(axis)]) {
      k[static_cast<std::size_t>(axis)] = klo[static_cast<std::size_t>(axis)];
      ++axis;
    }
    if (axis == d) break;
    ++k[static_cast<std::size_t>(axis)];
  }
  return out;
}

}  // namespace

ConvexSet ConvexSet::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size() || lower.size() < 1 || lower.size() > kMaxDim) {
    throw Error("box bounds must have equal dimension in [1, kMaxDim]");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) throw Error("box requires lower <= upper componentwise");
  }
  return ConvexSet(Box{std::move(lower), std::move(upper)});
}

ConvexSet ConvexSet::ball(Vec center, double radius) {
  if (center.size() < 1 || center.size() > kMaxDim) throw Error("ball dimension out of range");
  if (!(radius >= 0.0)) throw Error("ball radius must be nonnegative");
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::polytope(std::vector<Vec> vertices) {
  if (vertices.empty()) throw Error("polytope needs at least one vertex");
  const auto d = vertices.front().size();
  if (d < 1 || d > kMaxDim) throw Error("polytope dimension out of range");
  for (const Vec& v : vertices) {
    if (v.size() != d) throw Error("polytope vertices must share one dimension");
  }
  return ConvexSet(Polytope{std::move(vertices)});
}

int ConvexSet::dim() const {
  return std::visit(Overloaded{[](const Box& b) { return static_cast<int>(b.lower.size()); },
                               [](const Ball& b) { return static_cast<int>(b.center.size()); },
                               [](const Polytope& p) { return static_cast<int>(p.vertices.front().size()); }},
                    shape_);
}

Vec ConvexSet::center() const {
  return std::visit(Overloaded{[](const Box& b) -> Vec { return 0.5 * (b.lower + b.upper); },
                               [](const Ball& b) -> Vec { return b.center; },
                               [](const Polytope& p) -> Vec {
                                 Vec c = Vec::Zero(p.vertices.front().size());
                                 for (const Vec& v : p.vertices) c += v;
                                 return c / static_cast<double>(p.vertices.size());
                               }},
                    shape_);
}

std::vector<Vec> ConvexSet::extreme_points() const {
  return std::visit(Overloaded{[](const Box& b) {
                                 const auto d = static_cast<int>(b.lower.size());
                                 std::vector<Vec> out;
                                 for (unsigned mask = 0; mask < (1u << d); ++mask) {
                                   Vec p(d);
                                   for (int i = 0; i < d; ++i) p[i] = (mask >> i) & 1u ? b.upper[i] : b.lower[i];
                                   out.push_back(p);
                                 }
                                 return out;
                               },
                               [](const Ball& b) {
                                 std::vector<Vec> out;
                                 for (Eigen::Index i = 0; i < b.center.size(); ++i) {
                                   Vec p = b.center;
                                   p[i] += b.radius;
                                   out.push_back(p);
                                   p[i] -= 2.0 * b.radius;
                                   out.push_back(p);
                                 }
                                 return out;
                               },
                               [](const Polytope& p) { return p.vertices; }},
                    shape_);
}

void ConvexSet::bounding_box(Vec& lower, Vec& upper) const {
  std::visit(Overloaded{[&](const Box& b) {
                          lower = b.lower;
                          upper = b.upper;
                        },
                        [&](const Ball& b) {
                          lower = b.center.array() - b.radius;
                          upper = b.center.array() + b.radius;
                        },
                        [&](const Polytope& p) {
                          lower = upper = p.vertices.front();
                          for (const Vec& v : p.vertices) {
                            lower = lower.cwiseMin(v);
                            upper = upper.cwiseMax(v);
                          }
                        }},
             shape_);
}

double ConvexSet::diameter() const {
  return std::visit(Overloaded{[](const Box& b) { return (b.upper - b.lower).norm(); },
                               [](const Ball& b) { return 2.0 * b.radius; },
                               [](const Polytope& p) {
                                 double best = 0.0;
                                 for (std::size_t i = 0; i < p.vertices.size(); ++i) {
                                   for (std::size_t j = i + 1; j < p.vertices.size(); ++j) {
                                     best = std::max(best, (p.vertices[i] - p.vertices[j]).norm());
                                   }
                                 }
                                 return best;
                               }},
                    shape_);
}

double ConvexSet::max_norm() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return b->center.norm() + b->radius;
  double best = 0.0;
  for (const Vec& v : extreme_points()) best = std::max(best, v.norm());
  return best;
}

Vec ConvexSet::nearest(const Vec& x) const {
  if (x.size() != dim()) throw Error("point dimension does not match convex set");
  return std::visit(Overloaded{[&](const Box& b) -> Vec { return x.cwiseMax(b.lower).cwiseMin(b.upper); },
                               [&](const Ball& b) -> Vec {
                                 const Vec diff = x - b.center;
                                 const double n = diff.norm();
                                 if (n <= b.radius) return x;
                                 return b.center + (b.radius / n) * diff;
                               },
                               [&](const Polytope& p) -> Vec { return nearest_in_hull(p.vertices, x); }},
                    shape_);
}

ConvexSet ConvexSet::affine_image(const Vec& offset, double scale) const {
  return std::visit(Overloaded{[&](const Box& b) {
                                 Vec lo = offset + scale * b.lower;
                                 Vec hi = offset + scale * b.upper;
                                 if (scale < 0.0) std::swap(lo, hi);
                                 return ConvexSet::box(lo, hi);
                               },
                               [&](const Ball& b) {
                                 return ConvexSet::ball(offset + scale * b.center, std::abs(scale) * b.radius);
                               },
                               [&](const Polytope& p) {
                                 std::vector<Vec> vs;
                                 vs.reserve(p.vertices.size());
                                 for (const Vec& v : p.vertices) vs.push_back(offset + scale * v);
                                 return ConvexSet::polytope(std::move(vs));
                               }},
                    shape_);
}

Vec nearest_in_hull(const std::vector<Vec>& vertices, const Vec& x) {
  if (vertices.empty()) throw EmptySetError("empty set");
  if (vertices.size() == 1) return vertices.front();
  const auto d = x.size();
  const std::size_t n = vertices.size();
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(n);
  double scale2 = 0.0;
  for (const Vec& v : vertices) {
    pts.emplace_back(v - x);
    scale2 = std::max(scale2, pts.back().squaredNorm());
  }
  if (scale2 == 0.0) return x;
  const double tol = 1e-12 * scale2;

  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (pts[i].squaredNorm() < pts[start].squaredNorm()) start = i;
  }
  std::vector<std::size_t> active{start};
  std::vector<double> weights{1.0};
  Eigen::VectorXd y = pts[start];

  for (int major = 0; major < 1000; ++major) {
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double v = y.dot(pts[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (best >= y.squaredNorm() - tol) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    weights.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      const auto k = static_cast<Eigen::Index>(active.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
          kkt(a, b) = pts[active[static_cast<std::size_t>(a)]].dot(pts[active[static_cast<std::size_t>(b)]]);
        }
        kkt(a, k) = 1.0;
        kkt(k, a) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs[k] = 1.0;
      const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      const Eigen::VectorXd v = sol.head(k);
      if ((v.array() > 1e-14).all()) {
        for (Eigen::Index a = 0; a < k; ++a) weights[static_cast<std::size_t>(a)] = v[a];
        break;
      }
      double theta = 1.0;
      for (Eigen::Index a = 0; a < k; ++a) {
        const double w = weights[static_cast<std::size_t>(a)];
        if (v[a] <= 1e-14 && w - v[a] > 0.0) theta = std::min(theta, w / (w - v[a]));
      }
      std::vector<std::size_t> next_active;
      std::vector<double> next_weights;
      double sum = 0.0;
      for (Eigen::Index a = 0; a < k; ++a) {
        const double w = theta * v[a] + (1.0 - theta) * weights[static_cast<std::size_t>(a)];
        if (w > 1e-14) {
          next_active.push_back(active[static_cast<std::size_t>(a)]);
          next_weights.push_back(w);
          sum += w;
        }
      }
      if (next_active.empty()) {
        next_active.push_back(active.back());
        next_weights.push_back(1.0);
        sum = 1.0;
      }
      for (double& w : next_weights) w /= sum;
      active.swap(next_active);
      weights.swap(next_weights);
    }
    y.setZero(d);
    for (std::size_t a = 0; a < active.size(); ++a) y += weights[a] * pts[active[a]];
  }
  return x + Vec(y);
}

PointCloud sample_convex(const ConvexSet& s, double eps) {
  if (!(eps > 0.0)) throw Error("sampling width eps must be positive");
  PointCloud out = std::holds_alternative<Box>(s.variant()) ? sample_box(std::get<Box>(s.variant()), eps)
                                                            : sample_by_projection(s, eps);
  sort_unique_points(out);
  return out;
}

PointCloud minkowski_point_set(const Vec& z, double h, const ConvexSet& s, double eps) {
  if (h < 0.0) throw Error("step h must be nonnegative");
  if (h == 0.0) return {z};
  PointCloud out = sample_convex(s, eps);
  for (Vec& m : out) m = z + h * m;
  return out;
}

}  // namespace odi
