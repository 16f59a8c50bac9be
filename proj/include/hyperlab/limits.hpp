#pragma once

#include <string>
#include <vector>

#include "hyperlab/empirical.hpp"
#include "hyperlab/patterson.hpp"

namespace hyperlab {

// ---- regions in the cusp picture ----

struct Region {
  enum class Kind { Z, Z_band, Z0, cone } kind = Kind::Z;
  double s = 0;          // Z, Z0: height bound e^s (may be INFINITY)
  double a = 0, b = 0;   // Z_band: e^a <= Im <= e^b; cone: a < d(i, z) <= b
  std::vector<double> A_lo, A_hi;  // Z, Z_band: box A for Re
  double sigma = 0;                // Z0: volume of the ball B_sigma
  std::vector<double> B_center;    // cone: unit tangent at i
  double B_radius = 0;             // cone: angular radius of the cap B
  double theta_hat = 1, delta_hat = 1;

  static Region Z(double s, std::vector<double> lo, std::vector<double> hi, double theta_hat = 1, double delta_hat = 1);
  static Region Z_band(double a, double b, std::vector<double> lo, std::vector<double> hi, double theta_hat = 1,
                       double delta_hat = 1);
  static Region Z0(double s, double sigma, double theta_hat = 1, double delta_hat = 1);
  static Region cone(double a, double b, std::vector<double> center, double radius);

  /// theta^{-1/delta}, the width scale on the boundary.
  double width_scale() const;
};

/// Radius of the ball of volume sigma in R^k.
double ball_radius(int k, double sigma);

bool region_contains(const Region& R, const HPoint& z);

// ---- orbit data around w ----

/// One orbit point gamma w, moved to the base point frame by g_w^{-1}:
/// g_w^{-1} gamma w = k(theta_rot)(e^l i).
struct GammaDatum {
  MoebiusMap map;
  std::vector<int> word;
  double l = 0;
  double theta_rot = 0;
  double alpha = 0;  // direction angle of g_w^{-1} gamma w at i, equal to 2 theta_rot mod 2 pi
  HPoint image;      // g_w^{-1} gamma w
};

/// Orbit points with 0 < d(w, gamma w) < l_cutoff.
std::vector<GammaDatum> gamma_data(const GroupSpec& spec, const HPoint& w, double l_cutoff,
                                   const EnumOptions& opt = {});

/// Log-height of g_w = n(Re w) a(log Im w).
double log_height(const HPoint& w);

/// Is a_{-r} k(theta + theta(gamma))(e^l i) in Z(inf, [0, L))? Evaluated by
/// applying the Moebius maps.
bool e_gamma_contains(const GammaDatum& g, double r, double theta, double L, double theta_hat, double delta_hat);
/// The same test in closed form.
bool e_gamma_contains_closed(const GammaDatum& g, double r, double theta, double L, double theta_hat,
                             double delta_hat);

// ---- the observer distribution ----

/// Directions alpha (clockwise from up) of the far observer seen from the
/// typical orbit point, with weights. Need not be normalized.
struct ObserverNodes {
  std::vector<double> alpha, weight;
};
/// Uniform directions, the lattice case.
ObserverNodes lattice_observer(int nodes = 4000);
/// Atoms of an interior measure (angle chart).
ObserverNodes observer_from_measure(const AtomicMeasure& nu);
/// Directions at w of the orbit points gamma i with t_inner <= d(w, gamma i) < t_outer,
/// equal weights: the far observers themselves. Preferred over the Patterson
/// approximant, whose heavy inner atoms sit exactly on orbit geodesics.
ObserverNodes observer_shell(const GroupSpec& spec, const HPoint& w, double t_inner, double t_outer,
                             const EnumOptions& opt = {});
/// Patterson approximant of the directions at w of the orbit of i.
AtomicMeasure observer_measure(const GroupSpec& spec, const HPoint& w, double s, double t_truncate,
                               const EnumOptions& opt = {});

// ---- limit curves ----

struct LimitOptions {
  double delta_hat = 1, theta_hat = 1;
  double y_max = 8;       // depth of the typical point below the counting horizon
  double l_cutoff = 10;   // the data were enumerated up to here
  double margin = 2;
  double fd_step = 1e-3;
  int threads = 0;
};

struct LimitCurve {
  StatKind kind = StatKind::gap_cdf;
  std::vector<double> abscissae;
  std::vector<double> values;      // fitted
  std::vector<double> raw;         // unnormalized integrals
  std::vector<double> check;       // independent cross-check where one exists, else empty
  double prefactor = 1;            // values = prefactor * raw
  double tail_fraction = 0;        // integrand mass in the last 10% of the depth range
  std::vector<std::string> warnings;

  ScaledDistribution to_distribution() const;
};

/// F(L): probability that no orbit point lies in the next-neighbour window
/// of width L. Fitted so F(0+) = 1.
LimitCurve gap_limit_cdf(const std::vector<GammaDatum>& data, const ObserverNodes& nu,
                         const std::vector<double>& L, const LimitOptions& opt);

/// P(L) = -F'(L) from the moving ends of the excluded depth intervals, and
/// the centered difference of F as the check.
struct DensityValue {
  double formula = 0, finite_difference = 0;
  double raw_formula = 0;
};
DensityValue gap_limit_density(const std::vector<GammaDatum>& data, const ObserverNodes& nu, double L,
                               const LimitOptions& opt);
/// Density on a grid; values are the formula, check the finite difference.
LimitCurve gap_limit_density_curve(const std::vector<GammaDatum>& data, const ObserverNodes& nu,
                                   const std::vector<double>& L, const LimitOptions& opt);

/// J(L): no orbit point within L on either side. Fitted so J(0+) = 1.
LimitCurve nearest_neighbor_limit(const std::vector<GammaDatum>& data, const ObserverNodes& nu,
                                  const std::vector<double>& L, const LimitOptions& opt);

/// R2(xi): expected number of neighbours within xi. Raw values are
/// normalized per typical point; with calibration_xi > 0 the curve is scaled
/// to calibration_value there.
LimitCurve pair_correlation_limit(const std::vector<GammaDatum>& data, const ObserverNodes& nu,
                                  const std::vector<double>& xi, const LimitOptions& opt,
                                  double calibration_xi = 0, double calibration_value = 0);

}  // namespace hyperlab
