#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace hyperlab {

/// Hash-grid set of points for near-duplicate detection. Points are equal when
/// every coordinate differs by at most tol; cell must exceed tol.
class PointGrid {
 public:
  PointGrid(int dim, double cell, double tol);

  /// Index of a stored point equal to p, or -1.
  long find(std::span<const double> p) const;
  /// Inserts unconditionally and returns the new index.
  std::size_t insert(std::span<const double> p);
  /// Inserts when no equal point is stored. Returns (index, inserted).
  std::pair<std::size_t, bool> insert_unique(std::span<const double> p);

  std::size_t size() const { return coords_.size() / dim_; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }

 private:
  std::uint64_t key(const std::int64_t* cell) const;
  bool equal(std::size_t i, std::span<const double> p) const;

  int dim_;
  double cell_;
  double tol_;
  std::vector<double> coords_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

}  // namespace hyperlab
