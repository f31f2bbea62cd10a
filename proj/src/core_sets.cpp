#include "odi/core_sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace odi {

namespace {

constexpr std::size_t kCompactThreshold = std::size_t{1} << 20;

bool row_less(const std::int64_t* a, const std::int64_t* b, int dim) {
  return std::lexicographical_compare(a, a + dim, b, b + dim);
}

bool row_equal(const std::int64_t* a, const std::int64_t* b, int dim) {
  return std::equal(a, a + dim, b);
}

}  // namespace

GridSpec::GridSpec(double rho_, Vec center_) : rho(rho_), center(std::move(center_)) {
  if (!(rho > 0.0)) throw Error("grid width rho must be positive");
  if (center.size() < 1 || center.size() > kMaxDim) throw Error("grid dimension out of range");
}

Vec GridSpec::point(Cell cell) const {
  Vec p(center.size());
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    p[i] = center[i] + rho * static_cast<double>(cell[static_cast<std::size_t>(i)]);
  }
  return p;
}

double GridSpec::projection_radius() const { return 0.5 * std::sqrt(static_cast<double>(dim())) * rho; }

namespace detail {

void sort_unique_rows(std::vector<std::int64_t>& flat, int dim) {
  if (dim == 1) {
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    return;
  }
  const std::size_t n = flat.size() / static_cast<std::size_t>(dim);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  const std::int64_t* base = flat.data();
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return row_less(base + std::size_t{a} * dim, base + std::size_t{b} * dim, dim);
  });
  std::vector<std::int64_t> out;
  out.reserve(flat.size());
  for (std::size_t k = 0; k < n; ++k) {
    const std::int64_t* row = base + std::size_t{order[k]} * dim;
    if (!out.empty() && row_equal(out.data() + out.size() - dim, row, dim)) continue;
    out.insert(out.end(), row, row + dim);
  }
  flat.swap(out);
}

void merge_rows(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                std::vector<std::int64_t>& out, int dim) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const std::int64_t* ra = a.data() + i;
    const std::int64_t* rb = b.data() + j;
    if (row_less(ra, rb, dim)) {
      out.insert(out.end(), ra, ra + dim);
      i += dim;
    } else if (row_less(rb, ra, dim)) {
      out.insert(out.end(), rb, rb + dim);
      j += dim;
    } else {
      out.insert(out.end(), ra, ra + dim);
      i += dim;
      j += dim;
    }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
}

}  // namespace detail

LatticeSet::LatticeSet(GridSpec spec, std::vector<std::int64_t> coords)
    : spec_(std::move(spec)), coords_(std::move(coords)) {
  if (coords_.size() % static_cast<std::size_t>(dim()) != 0) throw Error("cell coordinates do not match grid dimension");
  detail::sort_unique_rows(coords_, dim());
}

bool LatticeSet::contains(Cell c) const {
  const int d = dim();
  if (static_cast<int>(c.size()) != d) return false;
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const std::int64_t* row = coords_.data() + mid * static_cast<std::size_t>(d);
    if (row_less(row, c.data(), d)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < size() && row_equal(coords_.data() + lo * static_cast<std::size_t>(d), c.data(), d);
}

PointCloud LatticeSet::points() const {
  PointCloud out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

LatticeBuilder::LatticeBuilder(GridSpec spec) : spec_(std::move(spec)) {}

void LatticeBuilder::add(Cell c) {
  pending_.insert(pending_.end(), c.begin(), c.end());
  if (pending_.size() / static_cast<std::size_t>(spec_.dim()) >= kCompactThreshold) compact();
}

void LatticeBuilder::add_projection(const Vec& x) {
  const int d = spec_.dim();
  if (x.size() != d) throw Error("point dimension does not match grid");
  const double r2 = 0.25 * d * spec_.rho * spec_.rho;
  const double r = std::sqrt(r2);
  std::int64_t lo[kMaxDim];
  std::int64_t hi[kMaxDim];
  std::int64_t k[kMaxDim];
  for (int i = 0; i < d; ++i) {
    const double u = (x[i] - spec_.center[i]) / spec_.rho;
    // One cell of slack on both sides; the exact test below decides membership.
    lo[i] = static_cast<std::int64_t>(std::ceil(u - r / spec_.rho)) - 1;
    hi[i] = static_cast<std::int64_t>(std::floor(u + r / spec_.rho)) + 1;
    k[i] = lo[i];
  }
  for (;;) {
    double dist2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double diff = x[i] - (spec_.center[i] + spec_.rho * static_cast<double>(k[i]));
      dist2 += diff * diff;
    }
    if (dist2 <= r2) add(Cell(k, static_cast<std::size_t>(d)));
    int axis = 0;
    while (axis < d && k[axis] == hi[axis]) {
      k[axis] = lo[axis];
      ++axis;
    }
    if (axis == d) break;
    ++k[axis];
  }
}

void LatticeBuilder::compact() {
  if (pending_.empty()) return;
  const int d = spec_.dim();
  detail::sort_unique_rows(pending_, d);
  if (sorted_.empty()) {
    sorted_.swap(pending_);
  } else {
    detail::merge_rows(sorted_, pending_, scratch_, d);
    sorted_.swap(scratch_);
    scratch_.clear();
  }
  pending_.clear();
}

void LatticeBuilder::merge(LatticeBuilder&& other) {
  if (!(other.spec_ == spec_)) throw Error("cannot merge lattice sets on different grids");
  other.compact();
  compact();
  detail::merge_rows(sorted_, other.sorted_, scratch_, spec_.dim());
  sorted_.swap(scratch_);
  scratch_.clear();
  other.sorted_.clear();
}

std::size_t LatticeBuilder::distinct_upper_bound() const {
  return (sorted_.size() + pending_.size()) / static_cast<std::size_t>(spec_.dim());
}

LatticeSet LatticeBuilder::finish() && {
  compact();
  return LatticeSet(LatticeSet::Sorted{}, std::move(spec_), std::move(sorted_));
}

std::vector<std::int64_t> project_point(const Vec& x, const GridSpec& spec) {
  if (x.size() != spec.dim()) throw Error("point dimension does not match grid");
  std::vector<std::int64_t> cell(static_cast<std::size_t>(spec.dim()));
  for (int i = 0; i < spec.dim(); ++i) {
    cell[static_cast<std::size_t>(i)] = std::llround((x[i] - spec.center[i]) / spec.rho);
  }
  return cell;
}

LatticeSet project_set(const PointCloud& a, const GridSpec& spec) {
  if (a.empty()) throw EmptySetError("empty set");
  LatticeBuilder builder(spec);
  for (const Vec& x : a) builder.add_projection(x);
  return std::move(builder).finish();
}

}  // namespace odi
