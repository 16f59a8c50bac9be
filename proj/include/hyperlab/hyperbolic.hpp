#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hyperlab/clifford.hpp"

namespace hyperlab {

/// Point of upper half-space H^n: boundary coordinate x in R^{n-1}, height y > 0.
struct HPoint {
  std::vector<double> x;
  double y = 1.0;

  int n() const { return static_cast<int>(x.size()) + 1; }
  static HPoint base(int n) { return {std::vector<double>(n - 1, 0.0), 1.0}; }
};

/// Point of R^{n-1} or the point at infinity.
struct BoundaryPoint {
  std::vector<double> x;
  bool infinite = false;

  int n() const { return static_cast<int>(x.size()) + 1; }
  static BoundaryPoint at_infinity(int n) { return {std::vector<double>(n - 1, 0.0), true}; }
  static BoundaryPoint finite(std::vector<double> x) { return {std::move(x), false}; }
};

/// 2x2 Vahlen matrix with entries in C_{n-2}, acting on H^n.
struct MoebiusMap {
  int n = 2;
  CliffordNumber a, b, c, d;

  static MoebiusMap identity(int n);
  static MoebiusMap from_entries(int n, CliffordNumber a, CliffordNumber b, CliffordNumber c,
                                 CliffordNumber d);
  static MoebiusMap real(double a, double b, double c, double d);
  static MoebiusMap complex(std::complex<double> a, std::complex<double> b,
                            std::complex<double> c, std::complex<double> d);

  /// ad* - bc*, which is real for a Vahlen matrix.
  CliffordNumber pseudo_det() const;
  /// Empty when the Vahlen conditions hold to tol, else a description of the
  /// first offending entry.
  std::optional<std::string> vahlen_violation(double tol) const;
  /// Scales the matrix so the pseudo-determinant is 1. Throws if it is not
  /// a positive real.
  MoebiusMap normalized() const;
  MoebiusMap inverse() const;
  /// Largest coefficient difference, allowing an overall sign (PSL).
  double distance_to(const MoebiusMap& o) const;
};

MoebiusMap operator*(const MoebiusMap& g, const MoebiusMap& h);

/// Clifford algebra index of the matrix entries for H^n.
inline int entry_algebra(int n) { return n - 2; }

HPoint moebius_apply(const MoebiusMap& g, const HPoint& z);
BoundaryPoint moebius_apply(const MoebiusMap& g, const BoundaryPoint& xi);

double hyp_distance(const HPoint& z1, const HPoint& z2);
/// Euclidean distance between the half-space coordinate tuples.
double coord_distance(const HPoint& z1, const HPoint& z2);
double busemann(const BoundaryPoint& xi, const HPoint& x, const HPoint& y);

// One-parameter subgroups and charts.
MoebiusMap translation(const std::vector<double>& v);  // n_+(v): z -> z + v
MoebiusMap geodesic_flow(int n, double t);             // a_t = diag(e^{t/2}, e^{-t/2})
MoebiusMap rotation(double theta);                     // k(theta), n = 2
/// E(x) for x in R^{n-1}, |x| < pi/2.
MoebiusMap rotation_chart(const std::vector<double>& x);
/// Orientation-preserving similarity taking the base point i to z.
MoebiusMap similarity_to(const HPoint& z);
/// z -> -(z - xi)^{-1}, sending xi to infinity.
MoebiusMap send_to_infinity(const BoundaryPoint& xi);

/// n = 2: q = k(theta)(e^l i) with theta in (-pi/2, pi/2].
struct PolarCoords {
  double l = 0.0;
  double theta = 0.0;
};
PolarCoords polar_coords(double re, double im);
/// k(theta)(e^l i) in closed form, returned as (Re, Im).
std::pair<double, double> rotated_lift(double l, double theta);

/// Where the geodesic from z toward w crosses the hyperbolic unit sphere about z.
struct Direction {
  HPoint point;            // at distance 1 from z
  BoundaryPoint endpoint;  // end of the geodesic ray from z through w
  std::vector<double> tangent;  // unit tangent at z, last coordinate is "up"
  double angle = 0.0;      // n = 2: clockwise angle from "up" in [0, 2pi)
};
Direction direction(const HPoint& z, const HPoint& w);
HPoint direction_function(const HPoint& z, const HPoint& w);

/// Chart coordinate x of a direction at i, inverse to xi = E(x)^{-1} 0.
std::vector<double> direction_chart(const BoundaryPoint& endpoint);

double polar_weight(const MoebiusMap& k);

/// Conformal scale factor |g'(xi)| of a det-1 Vahlen map at a finite point.
double boundary_derivative(const MoebiusMap& g, const BoundaryPoint& xi);

/// Normalized measure of a spherical cap of angular radius rho on S^{n-1}.
double cap_fraction(int n, double rho);
/// Inverse of cap_fraction in rho.
double cap_radius(int n, double fraction);

}  // namespace hyperlab
