#include "hyperlab/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

#include "hyperlab/error.hpp"
#include "hyperlab/parallel.hpp"

namespace hyperlab {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::uint64_t splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double sphere_distance_from_dot(double dot) { return std::acos(std::clamp(dot, -1.0, 1.0)) / kTwoPi; }

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  state_ = splitmix(s) ^ (index * 0xD1B54A32D192ED03ULL);
  splitmix(state_);
}

std::uint64_t CounterRng::next() { return splitmix(state_); }

double CounterRng::uniform() { return (next() >> 11) * 0x1.0p-53; }

// ---- clouds ----

PointCloud PointCloud::circle(std::vector<double> coords) {
  PointCloud c;
  c.kind = Kind::flat;
  c.dim = 1;
  c.lattice = CuspLattice{{{1.0}}};
  for (double x : coords) {
    x -= std::floor(x);
    c.points.push_back({x});
  }
  return c;
}

PointCloud PointCloud::from_directions(const DirectionSet& set) {
  if (set.n == 2) {
    std::vector<double> u;
    u.reserve(set.size());
    for (const auto& p : set.points) u.push_back(p.chart[0] / kTwoPi);
    return circle(std::move(u));
  }
  PointCloud c;
  c.kind = Kind::sphere;
  c.dim = set.n;
  for (const auto& p : set.points) c.points.push_back(p.tangent);
  return c;
}

PointCloud PointCloud::from_boundary(const BoundarySet& set) {
  PointCloud c;
  c.kind = Kind::flat;
  c.dim = set.n - 1;
  c.lattice = set.lattice;
  c.points = set.points;
  for (auto& p : c.points) set.lattice.reduce(p);
  return c;
}

double PointCloud::distance(std::size_t i, std::size_t j) const {
  const auto& a = points[i];
  const auto& b = points[j];
  if (kind == Kind::sphere) {
    double dot = 0;
    for (int k = 0; k < dim; ++k) dot += a[k] * b[k];
    return sphere_distance_from_dot(dot);
  }
  std::vector<double> d(dim);
  for (int k = 0; k < dim; ++k) d[k] = a[k] - b[k];
  if (lattice.rank() > 0) {
    // nearest image: reduce, then try the neighbouring translates
    lattice.reduce(d);
    double best = INFINITY;
    const int r = lattice.rank();
    std::vector<int> off(r, -1);
    while (true) {
      double s = 0;
      for (int k = 0; k < dim; ++k) {
        double v = d[k];
        for (int q = 0; q < r; ++q) v += off[q] * lattice.basis[q][k];
        s += v * v;
      }
      best = std::min(best, s);
      int q = 0;
      while (q < r && off[q] == 1) off[q++] = -1;
      if (q == r) break;
      ++off[q];
    }
    return std::sqrt(best);
  }
  double s = 0;
  for (double v : d) s += v * v;
  return std::sqrt(s);
}

CloudIndex::CloudIndex(const PointCloud& cloud, double radius) : cloud_(&cloud), radius_(radius) {
  if (!(radius > 0)) throw DomainError("neighbour search radius must be positive");
  if (cloud.kind == PointCloud::Kind::sphere) {
    cell_ = radius >= 0.5 ? 2.0 : 2 * std::sin(std::numbers::pi * radius);
    coords_ = cloud.points;
    owner_.resize(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) owner_[i] = i;
  } else {
    cell_ = radius;
    const int r = cloud.lattice.rank();
    std::vector<int> off(r, -1);
    while (true) {
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        std::vector<double> x = cloud.points[i];
        for (int q = 0; q < r; ++q)
          for (int k = 0; k < cloud.dim; ++k) x[k] += off[q] * cloud.lattice.basis[q][k];
        coords_.push_back(std::move(x));
        owner_.push_back(i);
      }
      int q = 0;
      while (q < r && off[q] == 1) off[q++] = -1;
      if (q == r) break;
      ++off[q];
    }
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) buckets_[key_of(coords_[i])].push_back(static_cast<std::uint32_t>(i));
}

std::uint64_t CloudIndex::key_of(const std::vector<double>& x) const {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : x) {
    const auto c = static_cast<std::int64_t>(std::floor(v / cell_));
    h = (h ^ static_cast<std::uint64_t>(c)) * 1099511628211ULL;
    h ^= h >> 29;
  }
  return h;
}

void CloudIndex::for_each_near(const std::vector<double>& q, std::size_t skip,
                               const std::function<void(std::size_t, double)>& fn) const {
  const std::size_t dim = q.size();
  std::vector<std::pair<std::size_t, double>> found;
  std::vector<int> off(dim, -1);
  std::vector<double> probe(dim);
  const bool sphere = cloud_->kind == PointCloud::Kind::sphere;
  // Large radii relative to the cells would need more than the 3^dim block;
  // the cell size equals the search radius so one ring suffices.
  while (true) {
    for (std::size_t k = 0; k < dim; ++k) probe[k] = q[k] + off[k] * cell_;
    const auto it = buckets_.find(key_of(probe));
    if (it != buckets_.end()) {
      for (std::uint32_t idx : it->second) {
        const std::size_t o = owner_[idx];
        if (o == skip) continue;
        const auto& x = coords_[idx];
        double d;
        if (sphere) {
          double dot = 0;
          for (std::size_t k = 0; k < dim; ++k) dot += x[k] * q[k];
          d = sphere_distance_from_dot(dot);
        } else {
          double s = 0;
          for (std::size_t k = 0; k < dim; ++k) s += (x[k] - q[k]) * (x[k] - q[k]);
          d = std::sqrt(s);
        }
        if (d < radius_) found.emplace_back(o, d);
      }
    }
    std::size_t k = 0;
    while (k < dim && off[k] == 1) off[k++] = -1;
    if (k == dim) break;
    ++off[k];
  }
  // Hash collisions and repeated cells can report an image twice; keep the nearest.
  std::sort(found.begin(), found.end());
  for (std::size_t i = 0; i < found.size(); ++i)
    if (i == 0 || found[i].first != found[i - 1].first) fn(found[i].first, found[i].second);
}

// ---- curves ----

std::string stat_kind_name(StatKind k) {
  switch (k) {
    case StatKind::gap_cdf: return "gap_cdf";
    case StatKind::gap_density: return "gap_density";
    case StatKind::nn_cdf: return "nn_cdf";
    case StatKind::pair_correlation: return "pair_correlation";
    case StatKind::counting: return "counting";
    case StatKind::moment: return "moment";
    case StatKind::mgf: return "mgf";
  }
  return "?";
}

GapSample gap_statistics(std::vector<double> u, double t) {
  if (u.size() < 2) throw DomainError("gap statistics need at least two points");
  for (double& x : u) x -= std::floor(x);
  std::sort(u.begin(), u.end());
  GapSample g;
  g.t = t;
  g.N = u.size();
  const double scale = std::exp(t);
  for (std::size_t j = 0; j + 1 < u.size(); ++j) g.scaled_gaps.push_back((u[j + 1] - u[j]) * scale);
  g.scaled_gaps.push_back((1.0 - u.back() + u.front()) * scale);
  return g;
}

GapSample gap_statistics(const DirectionSet& set) {
  if (set.n != 2) throw DomainError("gap statistics are defined on the circle (n = 2)");
  std::vector<double> u;
  for (const auto& p : set.points) u.push_back(p.chart[0] / kTwoPi);
  return gap_statistics(std::move(u), set.t);
}

ScaledDistribution gap_cdf(const GapSample& g, const std::vector<double>& L) {
  std::vector<double> s = g.scaled_gaps;
  std::sort(s.begin(), s.end());
  ScaledDistribution d;
  d.kind = StatKind::gap_cdf;
  d.t = g.t;
  d.sample_count = g.N;
  for (double l : L) {
    const auto below = std::lower_bound(s.begin(), s.end(), l) - s.begin();
    d.abscissae.push_back(l);
    d.values.push_back(static_cast<double>(s.size() - below) / s.size());
    d.stderr_.push_back(0.0);
  }
  return d;
}

ScaledDistribution nearest_neighbor_cdf(const PointCloud& cloud, const std::vector<double>& L, double t) {
  if (cloud.size() < 2) throw DomainError("nearest-neighbour statistics need at least two points");
  const double scale = std::exp(-t);
  const double lmax = L.empty() ? 0.0 : *std::max_element(L.begin(), L.end());
  std::vector<double> nn(cloud.size(), INFINITY);
  if (lmax > 0) {
    const CloudIndex index(cloud, lmax * scale * (1 + 1e-12));
    for (std::size_t i = 0; i < cloud.size(); ++i)
      index.for_each_near(cloud.points[i], i, [&](std::size_t, double d) { nn[i] = std::min(nn[i], d); });
  }
  std::sort(nn.begin(), nn.end());
  ScaledDistribution out;
  out.kind = StatKind::nn_cdf;
  out.t = t;
  out.sample_count = cloud.size();
  for (double l : L) {
    // open ball: isolated when nn >= l e^{-t}
    const auto below = std::lower_bound(nn.begin(), nn.end(), l * scale) - nn.begin();
    out.abscissae.push_back(l);
    out.values.push_back(static_cast<double>(nn.size() - below) / nn.size());
    out.stderr_.push_back(0.0);
  }
  return out;
}

namespace {

std::vector<double> pair_distances(const PointCloud& cloud, double radius) {
  std::vector<double> ds;
  if (!(radius > 0) || cloud.size() < 2) return ds;
  const CloudIndex index(cloud, radius);
  for (std::size_t i = 0; i < cloud.size(); ++i)
    index.for_each_near(cloud.points[i], i, [&](std::size_t, double d) { ds.push_back(d); });
  return ds;
}

}  // namespace

ScaledDistribution pair_correlation(const PointCloud& cloud, const std::vector<double>& xi, double t, double delta,
                                    double c0) {
  const double scale = std::exp(-t);
  const double xmax = xi.empty() ? 0.0 : *std::max_element(xi.begin(), xi.end());
  std::vector<double> ds = pair_distances(cloud, xmax * scale * (1 + 1e-12));
  std::sort(ds.begin(), ds.end());
  const double norm = c0 * std::exp(-delta * t);
  ScaledDistribution out;
  out.kind = StatKind::pair_correlation;
  out.t = t;
  out.sample_count = cloud.size();
  for (double x : xi) {
    const auto below = std::lower_bound(ds.begin(), ds.end(), x * scale) - ds.begin();
    out.abscissae.push_back(x);
    out.values.push_back(norm * static_cast<double>(below));
    out.stderr_.push_back(0.0);
  }
  return out;
}

double pair_correlation_smooth(const PointCloud& cloud, const std::function<double(double)>& f, double support,
                               double t, double delta, double c0) {
  const std::vector<double> ds = pair_distances(cloud, support * std::exp(-t));
  double s = 0;
  for (double d : ds) s += f(d * std::exp(t));
  return c0 * std::exp(-delta * t) * s;
}

// ---- samplers ----

Sampler Sampler::uniform(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size() || lo.empty()) throw DomainError("sampler box: inconsistent dimensions");
  for (std::size_t k = 0; k < lo.size(); ++k)
    if (!(hi[k] > lo[k])) throw DomainError("sampler box: empty side");
  Sampler s;
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  return s;
}

Sampler Sampler::grid(std::vector<double> lo, std::vector<double> hi, std::vector<int> nodes,
                      std::vector<double> values) {
  Sampler s = uniform(std::move(lo), std::move(hi));
  if (nodes.size() != s.lo.size()) throw DomainError("density grid: one node count per dimension");
  std::size_t total = 1;
  for (int m : nodes) {
    if (m < 2) throw DomainError("density grid needs at least two nodes per dimension");
    total *= m;
  }
  if (values.size() != total) throw DomainError("density grid: wrong number of values");
  double mx = 0;
  for (double v : values) {
    if (!(v >= 0) || !std::isfinite(v)) throw DomainError("density grid: values must be finite and nonnegative");
    mx = std::max(mx, v);
  }
  if (!(mx > 0)) throw DomainError("density grid is identically zero");
  s.nodes = std::move(nodes);
  s.values = std::move(values);
  return s;
}

double Sampler::density(const std::vector<double>& x) const {
  const int d = dim();
  for (int k = 0; k < d; ++k)
    if (x[k] < lo[k] || x[k] > hi[k]) return 0.0;
  if (nodes.empty()) return 1.0;
  std::vector<int> base(d);
  std::vector<double> frac(d);
  for (int k = 0; k < d; ++k) {
    const double u = (x[k] - lo[k]) / (hi[k] - lo[k]) * (nodes[k] - 1);
    base[k] = std::min(static_cast<int>(u), nodes[k] - 2);
    frac[k] = u - base[k];
  }
  double v = 0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1;
    std::size_t idx = 0;
    for (int k = 0; k < d; ++k) {
      const int bit = (corner >> k) & 1;
      w *= bit ? frac[k] : 1 - frac[k];
      idx = idx * nodes[k] + base[k] + bit;
    }
    v += w * values[idx];
  }
  return v;
}

std::vector<double> Sampler::draw(CounterRng& rng) const {
  const int d = dim();
  const double mx = nodes.empty() ? 1.0 : *std::max_element(values.begin(), values.end());
  std::vector<double> u(d);
  while (true) {
    for (int k = 0; k < d; ++k) u[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform();
    if (nodes.empty() || rng.uniform() * mx < density(u)) break;
  }
  if (frame.empty()) return u;
  std::vector<double> x(frame[0].size(), 0.0);
  for (int k = 0; k < d; ++k)
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += u[k] * frame[k][j];
  return x;
}

Sampler default_boundary_sampler(int n, const CuspLattice& lattice) {
  const int d = n - 1, r = lattice.rank();
  std::vector<double> lo(d, -1.0), hi(d, 1.0);
  for (int k = 0; k < r; ++k) {
    lo[k] = 0.0;
    hi[k] = 1.0;
  }
  Sampler s = Sampler::uniform(lo, hi);
  // frame: lattice basis, then an orthonormal completion by Gram-Schmidt
  s.frame = lattice.basis;
  std::vector<std::vector<double>> ortho;
  for (const auto& b : lattice.basis) {
    std::vector<double> v = b;
    for (const auto& o : ortho) {
      double p = 0;
      for (int j = 0; j < d; ++j) p += v[j] * o[j];
      for (int j = 0; j < d; ++j) v[j] -= p * o[j];
    }
    double len = 0;
    for (double x : v) len += x * x;
    len = std::sqrt(len);
    for (double& x : v) x /= len;
    ortho.push_back(v);
  }
  for (int e = 0; e < d && static_cast<int>(s.frame.size()) < d; ++e) {
    std::vector<double> v(d, 0.0);
    v[e] = 1.0;
    for (const auto& o : ortho) {
      double p = 0;
      for (int j = 0; j < d; ++j) p += v[j] * o[j];
      for (int j = 0; j < d; ++j) v[j] -= p * o[j];
    }
    double len = 0;
    for (double x : v) len += x * x;
    len = std::sqrt(len);
    if (len < 1e-9) continue;
    for (double& x : v) x /= len;
    ortho.push_back(v);
    s.frame.push_back(v);
  }
  return s;
}

Sampler default_interior_sampler(int n) {
  if (n == 2) return Sampler::uniform({0.0}, {kTwoPi});
  const double a = 0.999 * std::numbers::pi / (2 * std::sqrt(n - 1.0));
  return Sampler::uniform(std::vector<double>(n - 1, -a), std::vector<double>(n - 1, a));
}

// ---- counting ----

namespace {

void check_setup(const CountingSetup& setup, Observer expected) {
  if (setup.observer != expected) throw DomainError("counting setup observer does not match the point set");
  if (setup.N < 1) throw DomainError("test sets need N >= 1");
  if (!(setup.delta > 0)) throw DomainError("counting needs delta > 0");
}

CountSamples empty_samples(const CountingSetup& setup, int m, std::uint64_t seed, std::size_t n_samples) {
  if (m < 1) throw DomainError("counting needs at least one test set");
  if (n_samples < 1) throw DomainError("counting needs at least one sample");
  CountSamples cs;
  cs.m = m;
  cs.counts.assign(n_samples * m, 0);
  cs.scale_factor = std::exp((setup.n - 1 - setup.delta) * setup.t);
  cs.seed = seed;
  cs.t = setup.t;
  cs.s = setup.s;
  return cs;
}

}  // namespace

CountSamples sample_counts(const BoundarySet& set, const CountingSetup& setup, const Sampler& lambda,
                           std::size_t n_samples, std::uint64_t seed, int threads) {
  check_setup(setup, Observer::boundary);
  const int m = static_cast<int>(setup.box_lo.size());
  if (setup.box_hi.size() != setup.box_lo.size()) throw DomainError("box corners differ in count");
  CountSamples cs = empty_samples(setup, m, seed, n_samples);
  const int d = setup.n - 1;
  // Shapes are fixed; only the shift varies per sample.
  std::vector<BoxTest> shapes;
  double reach = 0;
  for (int j = 0; j < m; ++j) {
    shapes.push_back(make_box(setup.box_lo[j], setup.box_hi[j], std::vector<double>(d, 0.0),
                              static_cast<double>(setup.N), setup.delta, set.lattice));
    double diag = 0;
    for (int k = 0; k < d; ++k) diag += std::pow(shapes[j].scale * (setup.box_hi[j][k] - setup.box_lo[j][k]), 2);
    reach = std::max(reach, 0.5 * std::sqrt(diag));
  }
  const PointCloud cloud = PointCloud::from_boundary(set);
  if (cloud.size() == 0) return cs;
  const CloudIndex index(cloud, reach * (1 + 1e-9) + 1e-300);
  const std::size_t chunk = 256;
  parallel_for((n_samples + chunk - 1) / chunk, threads, [&](std::size_t c) {
    for (std::size_t k = c * chunk; k < std::min(n_samples, (c + 1) * chunk); ++k) {
      CounterRng rng(seed, k);
      const std::vector<double> x = lambda.draw(rng);
      for (int j = 0; j < m; ++j) {
        BoxTest b = shapes[j];
        b.shift = x;
        std::vector<double> center(d);
        for (int q = 0; q < d; ++q) center[q] = b.scale * 0.5 * (b.lo[q] + b.hi[q]) - x[q];
        set.lattice.reduce(center);
        std::int32_t hits = 0;
        index.for_each_near(center, static_cast<std::size_t>(-1),
                            [&](std::size_t p, double) { hits += box_contains(b, cloud.points[p]); });
        cs.counts[k * m + j] = hits;
      }
    }
  });
  return cs;
}

CountSamples sample_counts(const DirectionSet& set, const CountingSetup& setup, const Sampler& lambda,
                           std::size_t n_samples, std::uint64_t seed, int threads) {
  check_setup(setup, Observer::interior);
  const int m = static_cast<int>(setup.sigma.size());
  CountSamples cs = empty_samples(setup, m, seed, n_samples);
  const int n = setup.n;
  std::vector<double> up(n, 0.0);
  up[n - 1] = 1.0;
  std::vector<DiskTest> disks;
  double reach = 0;
  for (double sigma : setup.sigma) {
    disks.push_back(make_disk(n, sigma, up, static_cast<double>(setup.N), setup.delta));
    reach = std::max(reach, disks.back().radius / kTwoPi);
  }
  const PointCloud cloud = PointCloud::from_directions(set);
  if (cloud.size() == 0) return cs;
  const CloudIndex index(cloud, reach * (1 + 1e-9) + 1e-300);
  const std::size_t chunk = 256;
  parallel_for((n_samples + chunk - 1) / chunk, threads, [&](std::size_t c) {
    for (std::size_t k = c * chunk; k < std::min(n_samples, (c + 1) * chunk); ++k) {
      CounterRng rng(seed, k);
      const std::vector<double> x = lambda.draw(rng);
      std::vector<double> v;
      std::vector<double> q;
      if (n == 2) {
        v = tangent_at_angle(x[0]);
        q = {x[0] / kTwoPi - std::floor(x[0] / kTwoPi)};
      } else {
        // chart point c = -atan|xi| xi/|xi|  =>  xi = -tan|c| c/|c|
        double len = 0;
        for (double u : x) len += u * u;
        len = std::sqrt(len);
        std::vector<double> xi(n - 1, 0.0);
        if (len > 0)
          for (int j = 0; j < n - 1; ++j) xi[j] = -std::tan(len) * x[j] / len;
        v = tangent_toward(BoundaryPoint::finite(xi));
        q = v;
      }
      for (int j = 0; j < m; ++j) {
        DiskTest dk = disks[j];
        dk.center = v;
        std::int32_t hits = 0;
        index.for_each_near(q, static_cast<std::size_t>(-1),
                            [&](std::size_t p, double) { hits += disk_contains(dk, set.points[p].tangent); });
        cs.counts[k * m + j] = hits;
      }
    }
  });
  return cs;
}

Estimate counting_estimate(const CountSamples& cs, const std::vector<int>& r) {
  if (static_cast<int>(r.size()) != cs.m) throw DomainError("r has the wrong number of components");
  Estimate e;
  for (int v : r) {
    if (v < 0) throw DomainError("r must be nonnegative");
    if (v == 0) e.warnings.push_back("r = 0 requested: no convergence claim for orbit-free sets");
  }
  const std::size_t n = cs.size();
  std::size_t hit = 0;
  for (std::size_t k = 0; k < n; ++k) {
    bool all = true;
    for (int j = 0; j < cs.m && all; ++j) all = cs.at(k, j) == r[j];
    hit += all;
  }
  const double p = static_cast<double>(hit) / n;
  e.value = cs.scale_factor * p;
  e.stderr_ = cs.scale_factor * std::sqrt(p * (1 - p) / n);
  return e;
}

ScaledDistribution counting_distribution(const CountSamples& cs, int r_min, int r_max) {
  if (cs.m != 1) throw DomainError("counting_distribution tabulates a single test set");
  if (r_min < 0 || r_max < r_min) throw DomainError("bad r range");
  ScaledDistribution d;
  d.kind = StatKind::counting;
  d.scale_applied = true;
  d.scale_factor = cs.scale_factor;
  d.sample_count = cs.size();
  d.t = cs.t;
  d.s = cs.s;
  for (int r = r_min; r <= r_max; ++r) {
    const Estimate e = counting_estimate(cs, {r});
    d.abscissae.push_back(r);
    d.values.push_back(e.value);
    d.stderr_.push_back(e.stderr_);
    if (!e.warnings.empty() && d.warnings.empty()) d.warnings = e.warnings;
  }
  return d;
}

namespace {

Estimate mean_estimate(const CountSamples& cs, const std::function<double(std::size_t)>& f) {
  const std::size_t n = cs.size();
  double s = 0, s2 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = f(k);
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  const double var = n > 1 ? std::max(0.0, (s2 - n * mean * mean) / (n - 1)) : 0.0;
  return {cs.scale_factor * mean, cs.scale_factor * std::sqrt(var / n), {}};
}

double power_product(const CountSamples& cs, std::size_t k, const std::vector<double>& beta) {
  double v = 1;
  for (int j = 0; j < cs.m; ++j) v *= std::pow(static_cast<double>(cs.at(k, j)), beta[j]);
  return v;
}

void check_tau(const CountSamples& cs, const std::vector<double>& tau, double threshold) {
  if (static_cast<int>(tau.size()) != cs.m) throw DomainError("tau has the wrong number of components");
  double pos = 0;
  for (double x : tau) pos += std::max(0.0, x);
  if (pos >= threshold) throw DomainError("moment generating function diverges: sum of positive tau parts exceeds the threshold");
}

// Joint histogram of the samples, keyed by the count vector.
std::map<std::vector<int>, std::size_t> joint_histogram(const CountSamples& cs) {
  std::map<std::vector<int>, std::size_t> h;
  std::vector<int> r(cs.m);
  for (std::size_t k = 0; k < cs.size(); ++k) {
    for (int j = 0; j < cs.m; ++j) r[j] = cs.at(k, j);
    ++h[r];
  }
  return h;
}

TruncatedSum sum_over_distribution(const CountSamples& cs, int r_max,
                                   const std::function<double(const std::vector<int>&)>& weight) {
  TruncatedSum out;
  const double n = static_cast<double>(cs.size());
  for (const auto& [r, c] : joint_histogram(cs)) {
    const double e_hat = cs.scale_factor * (c / n);
    const bool inside = std::all_of(r.begin(), r.end(), [&](int v) { return v <= r_max; });
    (inside ? out.value : out.tail) += weight(r) * e_hat;
  }
  return out;
}

}  // namespace

Estimate moment_estimate(const CountSamples& cs, const std::vector<double>& beta) {
  if (static_cast<int>(beta.size()) != cs.m) throw DomainError("beta has the wrong number of components");
  for (double b : beta)
    if (!(b > 0)) throw DomainError("moment exponents must be positive");
  return mean_estimate(cs, [&](std::size_t k) { return power_product(cs, k, beta); });
}

Estimate mgf_estimate(const CountSamples& cs, const std::vector<double>& tau, double threshold) {
  check_tau(cs, tau, threshold);
  return mean_estimate(cs, [&](std::size_t k) {
    double dot = 0;
    for (int j = 0; j < cs.m; ++j) {
      if (cs.at(k, j) == 0) return 0.0;
      dot += tau[j] * cs.at(k, j);
    }
    return std::exp(dot);
  });
}

TruncatedSum moment_from_distribution(const CountSamples& cs, const std::vector<double>& beta, int r_max) {
  if (static_cast<int>(beta.size()) != cs.m) throw DomainError("beta has the wrong number of components");
  return sum_over_distribution(cs, r_max, [&](const std::vector<int>& r) {
    double v = 1;
    for (int j = 0; j < cs.m; ++j) v *= std::pow(static_cast<double>(r[j]), beta[j]);
    return v;
  });
}

TruncatedSum mgf_from_distribution(const CountSamples& cs, const std::vector<double>& tau, int r_max) {
  if (static_cast<int>(tau.size()) != cs.m) throw DomainError("tau has the wrong number of components");
  return sum_over_distribution(cs, r_max, [&](const std::vector<int>& r) {
    double dot = 0;
    for (int j = 0; j < cs.m; ++j) {
      if (r[j] == 0) return 0.0;
      dot += tau[j] * r[j];
    }
    return std::exp(dot);
  });
}

void write_curve_csv(std::ostream& os, const ScaledDistribution& d, const std::vector<std::string>& meta) {
  os.precision(17);
  os << "# statistic=" << stat_kind_name(d.kind) << " t=" << d.t << " s=" << d.s << " samples=" << d.sample_count
     << " scale_applied=" << (d.scale_applied ? 1 : 0) << " scale_factor=" << d.scale_factor << "\n";
  for (const auto& m : meta) os << "# " << m << "\n";
  for (const auto& w : d.warnings) os << "# warning: " << w << "\n";
  os << "abscissa,value,stderr\n";
  for (std::size_t i = 0; i < d.abscissae.size(); ++i)
    os << d.abscissae[i] << "," << d.values[i] << "," << (i < d.stderr_.size() ? d.stderr_[i] : 0.0) << "\n";
}

}  // namespace hyperlab
