#pragma once

#include "odi/core_sets.hpp"

#include <variant>
#include <vector>

namespace odi {

struct Box {
  Vec lower;
  Vec upper;
};

struct Ball {
  Vec center;
  double radius = 0.0;
};

/// Convex hull of a finite vertex list.
struct Polytope {
  std::vector<Vec> vertices;
};

/// Nonempty compact convex subset of R^d. Validated on construction.
class ConvexSet {
 public:
  using Variant = std::variant<Box, Ball, Polytope>;

  static ConvexSet box(Vec lower, Vec upper);
  static ConvexSet ball(Vec center, double radius);
  static ConvexSet polytope(std::vector<Vec> vertices);
  static ConvexSet point(const Vec& p) { return box(p, p); }

  const Variant& variant() const { return shape_; }
  int dim() const;
  /// Box midpoint, ball center, or vertex centroid.
  Vec center() const;
  /// Corners, vertices, or the 2d axis poles of a ball.
  std::vector<Vec> extreme_points() const;
  void bounding_box(Vec& lower, Vec& upper) const;
  double diameter() const;
  /// Max Euclidean norm of an element.
  double max_norm() const;

  /// Euclidean projection onto the set.
  Vec nearest(const Vec& x) const;
  double distance(const Vec& x) const { return (nearest(x) - x).norm(); }
  bool contains(const Vec& x, double tol = 1e-12) const { return distance(x) <= tol; }

  /// Image under x -> offset + scale * x.
  ConvexSet affine_image(const Vec& offset, double scale) const;

 private:
  explicit ConvexSet(Variant v) : shape_(std::move(v)) {}
  Variant shape_;
};

/// Nearest point of conv(vertices) to x (Wolfe's minimum-norm-point method).
Vec nearest_in_hull(const std::vector<Vec>& vertices, const Vec& x);

/// Finite D inside S with dist_H(S, D) <= sqrt(d)/2 * eps. The mesh is anchored
/// at S.center(); mesh points within sqrt(d)/2*eps of S are projected onto S,
/// and the extreme points of S are always included. Output is sorted and
/// duplicate-free.
PointCloud sample_convex(const ConvexSet& s, double eps);

/// {z + h m : m in sample_convex(S, eps)}.
PointCloud minkowski_point_set(const Vec& z, double h, const ConvexSet& s, double eps);

}  // namespace odi
