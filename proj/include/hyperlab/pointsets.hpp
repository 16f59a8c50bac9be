#pragma once

#include <iosfwd>
#include <vector>

#include "hyperlab/orbits.hpp"

namespace hyperlab {

struct DirectionPoint {
  HPoint point;                 // at hyperbolic distance 1 from the observer
  std::vector<double> tangent;  // unit tangent at the observer
  /// n = 2: clockwise angle from "up" in [0, 2pi). n >= 3: E(x) chart
  /// coordinate (NaN when the direction points straight up).
  std::vector<double> chart;
};

struct DirectionSet {
  int n = 2;
  HPoint z;
  double t = 0, s = 0;
  std::vector<DirectionPoint> points;
  std::size_t size() const { return points.size(); }
};

struct BoundarySet {
  int n = 2;
  double t = 0, s = 0;
  std::vector<std::vector<double>> points;
  CuspLattice lattice;
  std::size_t size() const { return points.size(); }
};

DirectionSet project_directions(const OrbitSlice& slice, const HPoint& z);
BoundarySet project_boundary(const OrbitSlice& slice, const CuspLattice& lattice);

/// Unit tangent at i of the geodesic ray ending at xi.
std::vector<double> tangent_toward(const BoundaryPoint& xi);
/// Unit tangent at i pointing at clockwise angle alpha from "up" (n = 2).
std::vector<double> tangent_at_angle(double alpha);

/// Shrinking disk D(sigma, v) on the sphere of directions: normalized cap
/// measure omega = sigma / N^{(n-1)/delta}.
struct DiskTest {
  std::vector<double> center;  // unit tangent
  double omega = 0;
  double radius = 0;           // angular radius
};

/// Rescaled box N^{-1/delta} A - x mod L on the boundary.
struct BoxTest {
  std::vector<double> lo, hi;  // A
  std::vector<double> shift;   // x
  double scale = 1;            // N^{-1/delta}
  CuspLattice lattice;
  double volume() const;       // Lebesgue volume of scale * A
};

DiskTest make_disk(int n, double sigma, const std::vector<double>& center, double N, double delta);
BoxTest make_box(const std::vector<double>& lo, const std::vector<double>& hi, const std::vector<double>& shift,
                 double N, double delta, const CuspLattice& lattice);

bool disk_contains(const DiskTest& d, const std::vector<double>& tangent);
bool box_contains(const BoxTest& b, const std::vector<double>& p);
std::size_t count_hits(const DirectionSet& set, const DiskTest& d);
std::size_t count_hits(const BoundarySet& set, const BoxTest& b);

void write_direction_csv(std::ostream& os, const DirectionSet& set);
void write_boundary_csv(std::ostream& os, const BoundarySet& set);

}  // namespace hyperlab
