#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "hyperlab/orbits.hpp"

namespace hyperlab {

struct FitReport {
  double delta_hat = 0;
  double slope_stderr = 0;
  double counting_constant_hat = 0;  // C in N_t ~ C e^{delta t}
  double theta_hat = 0;              // set by fit_theta, 0 until then
  double t_min = 0, t_max = 0;
  std::size_t samples = 0;
};

/// Least-squares line y = intercept + slope x with the slope's standard error.
struct LineFit {
  double slope = 0, intercept = 0, slope_stderr = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Affine fit of log N_t against t.
FitReport fit_delta(const std::vector<std::pair<double, double>>& counts);

enum class Observer { interior, boundary };

struct Atom {
  BoundaryPoint position;     // interior: end of the ray from i; boundary: Re reduced into the cell
  std::vector<double> chart;  // interior n = 2: angle at i in [0, 2pi); otherwise the boundary coordinate
  double weight = 0;
};

struct AtomicMeasure {
  int n = 2;
  Observer observer = Observer::interior;
  std::vector<Atom> atoms;
  double s_parameter = 0;
  double total_mass = 0;
  double base_orbit_t = 0;
  CuspLattice lattice;  // boundary observer only

  AtomicMeasure scaled(double factor) const;
};

/// Patterson approximant. Interior observer: atoms at the directions of the
/// orbit points gamma w seen from i, weights e^{-s d(i, gamma w)}. Boundary
/// observer: atoms at Re(gamma w) mod L over Gamma_inf-cosets with
/// Im(gamma w) >= e^{-t_truncate}, weights Im(gamma w)^s (the horospherical
/// Poincare series). Total mass normalized to 1.
AtomicMeasure patterson_atoms(const GroupSpec& spec, const HPoint& w, double s, double t_truncate,
                              Observer observer, double delta_hat, const EnumOptions& opt = {});
/// Interior atoms from an explicit list of points.
AtomicMeasure atoms_from_points(const std::vector<HPoint>& points, double s, double t_truncate);

/// Set descriptions for nu_eval. Arcs use the angle chart (n = 2 interior),
/// boxes and balls the boundary coordinate.
struct MeasureSet {
  enum class Kind { empty, full, arc, box, ball } kind = Kind::full;
  double arc_start = 0, arc_end = 0;  // counterclockwise extent in the angle chart, may wrap
  std::vector<double> lo, hi;         // box
  std::vector<double> center;         // ball
  double radius = 0;

  static MeasureSet empty_set() {
    MeasureSet F;
    F.kind = Kind::empty;
    return F;
  }
  static MeasureSet full_set() { return MeasureSet{}; }
  static MeasureSet arc(double a, double b);
  static MeasureSet box(std::vector<double> lo, std::vector<double> hi);
  static MeasureSet ball(std::vector<double> center, double radius);
};

/// Weight of atoms in F; atoms on the boundary of F count half.
double nu_eval(const AtomicMeasure& m, const MeasureSet& F);
double integrate_density(const AtomicMeasure& m, const std::function<double(const Atom&)>& density);

/// theta_hat = counting constant / nu(F_ref).
double fit_theta(const FitReport& counting, const AtomicMeasure& nu, const MeasureSet& F_ref);

void write_measure_csv(std::ostream& os, const AtomicMeasure& m);
void write_fit_json(std::ostream& os, const FitReport& r);

}  // namespace hyperlab
