#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperlab/patterson.hpp"
#include "hyperlab/pointsets.hpp"

namespace hyperlab {

// ---- counter-based random numbers ----

/// Stateless generator: the k-th draw of stream `index` depends only on
/// (seed, index, k), so parallel sample loops are reproducible.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index);
  std::uint64_t next();
  double uniform();  // in [0, 1)

 private:
  std::uint64_t state_;
};

// ---- point clouds with a metric ----

/// Projected points in one metric space. Circle and torus clouds store flat
/// coordinates with a lattice of periods. Sphere clouds store unit tangents and
/// measure the geodesic angle divided by 2 pi, so a great circle has length 1
/// like the n = 2 circle.
struct PointCloud {
  enum class Kind { flat, sphere } kind = Kind::flat;
  int dim = 1;
  std::vector<std::vector<double>> points;
  CuspLattice lattice;

  static PointCloud from_directions(const DirectionSet& set);
  static PointCloud from_boundary(const BoundarySet& set);
  static PointCloud circle(std::vector<double> coords);  // circumference 1
  std::size_t size() const { return points.size(); }
  double distance(std::size_t i, std::size_t j) const;
};

/// Bucket grid over a cloud, with lattice images, for range queries.
class CloudIndex {
 public:
  CloudIndex(const PointCloud& cloud, double radius);
  /// Calls fn(j, d) for every stored point j != skip with distance d < radius
  /// from q (one call per point, the nearest lattice image).
  void for_each_near(const std::vector<double>& q, std::size_t skip,
                     const std::function<void(std::size_t, double)>& fn) const;
  double radius() const { return radius_; }

 private:
  std::uint64_t key_of(const std::vector<double>& x) const;

  const PointCloud* cloud_;
  double radius_, cell_;
  std::vector<std::vector<double>> coords_;  // ambient coords of every stored image
  std::vector<std::size_t> owner_;           // cloud index of each image
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

// ---- curves ----

enum class StatKind { gap_cdf, gap_density, nn_cdf, pair_correlation, counting, moment, mgf };
std::string stat_kind_name(StatKind k);

struct ScaledDistribution {
  StatKind kind = StatKind::gap_cdf;
  std::vector<double> abscissae;
  std::vector<double> values;
  std::vector<double> stderr_;  // Monte-Carlo standard error, zero for exact counts
  bool scale_applied = false;   // e^{(n-1-delta)t} factor included
  double scale_factor = 1.0;
  std::size_t sample_count = 0;
  double t = 0, s = 0;
  std::vector<std::string> warnings;
};

struct GapSample {
  double t = 0;
  std::vector<double> scaled_gaps;  // gap_j e^t, circle of circumference 1
  std::size_t N = 0;
};

/// Cyclic gaps between sorted circle coordinates in [0, 1).
GapSample gap_statistics(std::vector<double> circle_coords, double t);
GapSample gap_statistics(const DirectionSet& set);
/// F_t(L) = fraction of scaled gaps >= L.
ScaledDistribution gap_cdf(const GapSample& g, const std::vector<double>& L);

/// J(L): fraction of points whose open ball of radius L e^{-t} holds no other point.
ScaledDistribution nearest_neighbor_cdf(const PointCloud& cloud, const std::vector<double>& L, double t);
/// R2(xi) = (c0 / e^{delta t}) #{ordered i != j : d(x_i, x_j) < xi e^{-t}}.
ScaledDistribution pair_correlation(const PointCloud& cloud, const std::vector<double>& xi, double t, double delta,
                                    double c0);
/// Smooth-window variant: (c0 / e^{delta t}) sum_{i != j} f(e^t d(x_i, x_j)), f supported in [0, support).
double pair_correlation_smooth(const PointCloud& cloud, const std::function<double(double)>& f, double support,
                               double t, double delta, double c0);

// ---- sampling measures ----

/// Probability measure on a chart box. Uniform, or a density given on a
/// regular node grid and interpolated multilinearly.
struct Sampler {
  std::vector<double> lo, hi;
  std::vector<std::vector<double>> frame;  // optional: point = sum_k u_k frame[k]
  std::vector<int> nodes;        // per dimension, empty for uniform
  std::vector<double> values;    // row-major, first dimension slowest
  static Sampler uniform(std::vector<double> lo, std::vector<double> hi);
  static Sampler grid(std::vector<double> lo, std::vector<double> hi, std::vector<int> nodes, std::vector<double> values);
  int dim() const { return static_cast<int>(lo.size()); }
  double density(const std::vector<double>& x) const;  // unnormalized
  std::vector<double> draw(CounterRng& rng) const;  // chart point mapped through the frame
};

/// Default sampler: Lebesgue on the cusp cell (boundary observer) or uniform on
/// the chart box |x_j| < pi/2 (interior, n >= 3), full circle for n = 2.
Sampler default_boundary_sampler(int n, const CuspLattice& lattice);
Sampler default_interior_sampler(int n);

// ---- counting random variables ----

/// One test set per component of the joint count. Boundary observer: boxes
/// A_j; interior: disks of parameter sigma_j.
struct CountingSetup {
  Observer observer = Observer::boundary;
  int n = 2;
  double t = 0, s = 0;
  double delta = 1;
  std::size_t N = 0;  // #P_{t,s}, the scale of the test sets
  std::vector<std::vector<double>> box_lo, box_hi;
  std::vector<double> sigma;
};

/// Raw per-sample counts, shared by every estimator so that identities
/// between them hold exactly.
struct CountSamples {
  int m = 1;
  std::vector<std::int32_t> counts;  // sample-major, m per sample
  double scale_factor = 1.0;         // e^{(n-1-delta)t}
  std::uint64_t seed = 0;
  double t = 0, s = 0;
  std::size_t size() const { return counts.size() / m; }
  std::int32_t at(std::size_t k, int j) const { return counts[k * m + j]; }
};

CountSamples sample_counts(const BoundarySet& set, const CountingSetup& setup, const Sampler& lambda,
                           std::size_t n_samples, std::uint64_t seed, int threads = 0);
CountSamples sample_counts(const DirectionSet& set, const CountingSetup& setup, const Sampler& lambda,
                           std::size_t n_samples, std::uint64_t seed, int threads = 0);

struct Estimate {
  double value = 0, stderr_ = 0;
  std::vector<std::string> warnings;
};

/// e^{(n-1-delta)t} lambda(N_j = r_j for all j), binomial standard error.
Estimate counting_estimate(const CountSamples& cs, const std::vector<int>& r);
/// m = 1 histogram over r = r_min..r_max.
ScaledDistribution counting_distribution(const CountSamples& cs, int r_min, int r_max);
/// e^{(n-1-delta)t} mean of prod N_j^{beta_j}.
Estimate moment_estimate(const CountSamples& cs, const std::vector<double>& beta);
/// e^{(n-1-delta)t} mean of exp(tau . N) 1(N_j != 0 for all j). Throws when
/// sum of positive parts of tau reaches `threshold`.
Estimate mgf_estimate(const CountSamples& cs, const std::vector<double>& tau, double threshold);

/// Sum over joint r <= r_max of weight(r) E_hat(r), plus the part of the
/// sample mean beyond r_max (reported as the tail).
struct TruncatedSum {
  double value = 0, tail = 0;
};
TruncatedSum moment_from_distribution(const CountSamples& cs, const std::vector<double>& beta, int r_max);
TruncatedSum mgf_from_distribution(const CountSamples& cs, const std::vector<double>& tau, int r_max);

void write_curve_csv(std::ostream& os, const ScaledDistribution& d, const std::vector<std::string>& meta = {});

}  // namespace hyperlab
