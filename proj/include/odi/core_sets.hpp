#pragma once

#include "odi/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace odi {

using PointCloud = std::vector<Vec>;
using Cell = std::span<const std::int64_t>;

/// Uniform lattice center + rho * Z^d.
struct GridSpec {
  double rho = 1.0;
  Vec center;

  GridSpec() = default;
  GridSpec(double rho_, Vec center_);

  int dim() const { return static_cast<int>(center.size()); }
  Vec point(Cell cell) const;
  /// Radius sqrt(d)/2 * rho of the projection neighbourhood.
  double projection_radius() const;

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.rho == b.rho && a.center.size() == b.center.size() && a.center == b.center;
  }
};

/// Finite set of lattice cells, stored as lexicographically sorted unique
/// rows of integer coordinates. Immutable once built.
class LatticeSet {
 public:
  LatticeSet() = default;
  /// Sorts and deduplicates `coords` (row-major, dim() entries per cell).
  LatticeSet(GridSpec spec, std::vector<std::int64_t> coords);

  const GridSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim(); }
  std::size_t size() const { return dim() == 0 ? 0 : coords_.size() / static_cast<std::size_t>(dim()); }
  bool empty() const { return coords_.empty(); }

  Cell cell(std::size_t i) const {
    const auto d = static_cast<std::size_t>(dim());
    return {coords_.data() + i * d, d};
  }
  Vec point(std::size_t i) const { return spec_.point(cell(i)); }
  bool contains(Cell c) const;
  PointCloud points() const;
  const std::vector<std::int64_t>& coords() const { return coords_; }

  friend bool operator==(const LatticeSet&, const LatticeSet&) = default;

 private:
  friend class LatticeBuilder;
  struct Sorted {};
  LatticeSet(Sorted, GridSpec spec, std::vector<std::int64_t> coords)
      : spec_(std::move(spec)), coords_(std::move(coords)) {}

  GridSpec spec_;
  std::vector<std::int64_t> coords_;
};

/// Accumulates cells and produces a deduplicated LatticeSet. Pending cells
/// are compacted periodically so memory stays proportional to the number of
/// distinct cells rather than the number of insertions.
class LatticeBuilder {
 public:
  explicit LatticeBuilder(GridSpec spec);

  const GridSpec& spec() const { return spec_; }
  void add(Cell c);
  /// Adds P_rho({x}), every cell whose grid point lies within sqrt(d)/2*rho of x.
  void add_projection(const Vec& x);
  void merge(LatticeBuilder&& other);
  std::size_t distinct_upper_bound() const;
  LatticeSet finish() &&;

 private:
  void compact();

  GridSpec spec_;
  std::vector<std::int64_t> sorted_;
  std::vector<std::int64_t> pending_;
  std::vector<std::int64_t> scratch_;
};

/// Nearest lattice cell, ties rounded half away from zero.
std::vector<std::int64_t> project_point(const Vec& x, const GridSpec& spec);

/// P_rho(A) = B_{sqrt(d)/2 rho}(A) intersected with the lattice. Throws
/// EmptySetError on empty input.
LatticeSet project_set(const PointCloud& a, const GridSpec& spec);

namespace detail {
void sort_unique_rows(std::vector<std::int64_t>& flat, int dim);
void merge_rows(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                std::vector<std::int64_t>& out, int dim);
}  // namespace detail

}  // namespace odi
