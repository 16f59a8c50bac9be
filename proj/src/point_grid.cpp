#include "hyperlab/point_grid.hpp"

#include <cmath>

#include "hyperlab/error.hpp"

namespace hyperlab {

PointGrid::PointGrid(int dim, double cell, double tol) : dim_(dim), cell_(cell), tol_(tol) {
  if (dim < 1 || dim > 8) throw DomainError("PointGrid dimension out of range");
  if (!(cell > tol)) throw DomainError("PointGrid cell must exceed the tolerance");
}

std::uint64_t PointGrid::key(const std::int64_t* cell) const {
  std::uint64_t h = 1469598103934665603ull;
  for (int j = 0; j < dim_; ++j) {
    h ^= static_cast<std::uint64_t>(cell[j]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 1099511628211ull;
  }
  return h;
}

bool PointGrid::equal(std::size_t i, std::span<const double> p) const {
  const double* q = coords_.data() + i * dim_;
  for (int j = 0; j < dim_; ++j)
    if (std::abs(q[j] - p[j]) > tol_) return false;
  return true;
}

long PointGrid::find(std::span<const double> p) const {
  std::int64_t base[8], cell[8];
  int lo[8], hi[8];
  for (int j = 0; j < dim_; ++j) {
    const double u = p[j] / cell_;
    base[j] = static_cast<std::int64_t>(std::floor(u));
    const double frac = (u - base[j]) * cell_;
    lo[j] = frac <= tol_ ? -1 : 0;
    hi[j] = cell_ - frac <= tol_ ? 1 : 0;
  }
  int off[8];
  for (int j = 0; j < dim_; ++j) off[j] = lo[j];
  while (true) {
    for (int j = 0; j < dim_; ++j) cell[j] = base[j] + off[j];
    auto it = buckets_.find(key(cell));
    if (it != buckets_.end())
      for (std::uint32_t i : it->second)
        if (equal(i, p)) return static_cast<long>(i);
    int j = 0;
    while (j < dim_ && off[j] == hi[j]) {
      off[j] = lo[j];
      ++j;
    }
    if (j == dim_) break;
    ++off[j];
  }
  return -1;
}

std::size_t PointGrid::insert(std::span<const double> p) {
  const std::size_t idx = size();
  std::int64_t cell[8];
  for (int j = 0; j < dim_; ++j) cell[j] = static_cast<std::int64_t>(std::floor(p[j] / cell_));
  coords_.insert(coords_.end(), p.begin(), p.begin() + dim_);
  buckets_[key(cell)].push_back(static_cast<std::uint32_t>(idx));
  return idx;
}

std::pair<std::size_t, bool> PointGrid::insert_unique(std::span<const double> p) {
  const long found = find(p);
  if (found >= 0) return {static_cast<std::size_t>(found), false};
  return {insert(p), true};
}

}  // namespace hyperlab
