#pragma once

#include "odi/core_sets.hpp"

namespace odi {

/// dist(A, B) = sup_{a in A} inf_{b in B} |a - b|, exact on finite clouds.
/// Candidates in B are visited in order of their first coordinate and the
/// scan stops once that coordinate alone exceeds the current best, so the
/// result is exact. The outer loop runs under OpenMP.
double dist_one_sided(const PointCloud& a, const PointCloud& b);

/// max(dist(A, B), dist(B, A)).
double dist_hausdorff(const PointCloud& a, const PointCloud& b);

/// Max pairwise distance between the grid points of a lattice set.
double diameter(const LatticeSet& set);

namespace reference {
/// Serial O(|A| |B|) double loop; kept as the oracle for the pruned kernel.
double dist_one_sided(const PointCloud& a, const PointCloud& b);
double dist_hausdorff(const PointCloud& a, const PointCloud& b);
}  // namespace reference

}  // namespace odi
