#include "odi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace odi {

namespace {

void require_nonempty(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) throw EmptySetError("empty set");
  if (a.front().size() != b.front().size()) throw Error("point clouds differ in dimension");
}

}  // namespace

double dist_one_sided(const PointCloud& a, const PointCloud& b) {
  require_nonempty(a, b);
  std::vector<std::size_t> order(b.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return b[i][0] < b[j][0]; });
  std::vector<double> keys(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) keys[i] = b[order[i]][0];

  double result = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for reduction(max : result) schedule(static)
  for (std::ptrdiff_t ia = 0; ia < n; ++ia) {
    const Vec& p = a[static_cast<std::size_t>(ia)];
    const auto mid = static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), p[0]) - keys.begin());
    double best2 = std::numeric_limits<double>::infinity();
    // Walk outward from the insertion point in both directions.
    for (std::size_t k = mid; k < keys.size(); ++k) {
      const double dx = keys[k] - p[0];
      if (dx * dx > best2) break;
      best2 = std::min(best2, (b[order[k]] - p).squaredNorm());
      if (best2 == 0.0) break;
    }
    for (std::size_t k = mid; k-- > 0 && best2 > 0.0;) {
      const double dx = p[0] - keys[k];
      if (dx * dx > best2) break;
      best2 = std::min(best2, (b[order[k]] - p).squaredNorm());
    }
    result = std::max(result, std::sqrt(best2));
  }
  return result;
}

double dist_hausdorff(const PointCloud& a, const PointCloud& b) {
  return std::max(dist_one_sided(a, b), dist_one_sided(b, a));
}

double diameter(const LatticeSet& set) {
  if (set.empty()) throw EmptySetError("empty set");
  if (set.dim() == 1) {
    return set.spec().rho * static_cast<double>(set.coords().back() - set.coords().front());
  }
  const PointCloud pts = set.points();
  double best2 = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(pts.size());
#pragma omp parallel for reduction(max : best2) schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = i + 1; j < n; ++j) {
      best2 = std::max(best2, (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]).squaredNorm());
    }
  }
  return std::sqrt(best2);
}

namespace reference {

double dist_one_sided(const PointCloud& a, const PointCloud& b) {
  require_nonempty(a, b);
  double result = 0.0;
  for (const Vec& p : a) {
    double best2 = std::numeric_limits<double>::infinity();
    for (const Vec& q : b) best2 = std::min(best2, (p - q).squaredNorm());
    result = std::max(result, std::sqrt(best2));
  }
  return result;
}

double dist_hausdorff(const PointCloud& a, const PointCloud& b) {
  return std::max(dist_one_sided(a, b), dist_one_sided(b, a));
}

}  // namespace reference

}  // namespace odi
