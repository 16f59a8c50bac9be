#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "hyperlab/empirical.hpp"
#include "hyperlab/groups.hpp"
#include "hyperlab/patterson.hpp"

namespace hyperlab {

struct Circle {
  std::complex<double> center;
  double curvature = 1;  // negative for the enclosing circle
  int generation = 0;

  double radius() const { return 1.0 / std::abs(curvature); }
};

/// 2(k1^2 + k2^2 + k3^2 + k4^2) - (k1 + k2 + k3 + k4)^2, zero for a Descartes quadruple.
double descartes_defect(const std::vector<double>& k);
/// Tangency defect of two circles: | |c1 - c2| - (r1 + r2) | for disjoint
/// interiors, | |c1 - c2| - |r1 - r2| | when one encloses the other.
double tangency_defect(const Circle& a, const Circle& b);

struct PackingStats {
  std::size_t duplicates = 0;          // circles reached twice and dropped
  double worst_descartes = 0;          // relative to (sum k)^2
  double worst_tangency = 0;
};

/// Every circle of the packing with curvature <= bound, by Descartes
/// reflection from a root quadruple. Circles are deduplicated on (center,
/// curvature) at `tol`.
std::vector<Circle> generate_apollonian(const std::vector<PlaneCircle>& root, double curvature_bound,
                                        double tol = 1e-9, PackingStats* stats = nullptr);

/// Circles with e^{-t} <= r < e^{s-t}.
std::vector<Circle> packing_slice(const std::vector<Circle>& circles, double t, double s);
/// Their centers, with no lattice.
BoundarySet packing_centers(const std::vector<Circle>& circles, double t, double s);

/// Image of a circle under a Moebius map of the plane (n = 3 Vahlen map).
Circle map_circle(const MoebiusMap& g, const Circle& c);
/// The apex (c, r) of the hemisphere over a circle.
HPoint apex(const Circle& c);

/// Same circles from the group side: the orbit of each root apex is walked
/// down to height e^{-t - extra_depth}, each orbit map moves its root circle,
/// and the image circles are kept when e^{-t} <= r < e^{s-t}.
std::vector<Circle> packing_from_orbit(const GroupSpec& spec, const std::vector<PlaneCircle>& root, double t,
                                       double s, double extra_depth = 3.0, const EnumOptions& opt = {});

/// #{r >= e^{-t}} ~ C e^{delta t} fitted over t in [t_lo, t_hi] (samples
/// points). t_hi <= 0 picks the last decade-and-a-half below the smallest radius.
FitReport packing_count_fit(const std::vector<Circle>& circles, double t_lo = 0, double t_hi = 0, int samples = 16);

void write_packing_csv(std::ostream& os, const std::vector<Circle>& circles);

}  // namespace hyperlab
