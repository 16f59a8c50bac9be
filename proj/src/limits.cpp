#include "hyperlab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hyperlab/error.hpp"
#include "hyperlab/parallel.hpp"

namespace hyperlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0 ? a + kTwoPi : a;
}

// into (-pi, pi]
double centered_angle(double a) {
  a = wrap_angle(a);
  return a > kPi ? a - kTwoPi : a;
}

bool in_box(const std::vector<double>& x, const std::vector<double>& lo, const std::vector<double>& hi, double scale) {
  for (std::size_t j = 0; j < x.size(); ++j)
    if (!(x[j] >= scale * lo[j] && x[j] < scale * hi[j])) return false;
  return true;
}

void check_box(const std::vector<double>& lo, const std::vector<double>& hi) {
  if (lo.size() != hi.size() || lo.empty()) throw DomainError("region box needs matching nonempty bounds");
  for (std::size_t j = 0; j < lo.size(); ++j)
    if (!(lo[j] <= hi[j])) throw DomainError("region box has lo > hi");
}

}  // namespace

// ---- regions ----

Region Region::Z(double s, std::vector<double> lo, std::vector<double> hi, double theta_hat, double delta_hat) {
  check_box(lo, hi);
  if (!(s > 0)) throw DomainError("Z(s, A) needs s > 0");
  Region R;
  R.kind = Kind::Z;
  R.s = s;
  R.A_lo = std::move(lo);
  R.A_hi = std::move(hi);
  R.theta_hat = theta_hat;
  R.delta_hat = delta_hat;
  return R;
}

Region Region::Z_band(double a, double b, std::vector<double> lo, std::vector<double> hi, double theta_hat,
                      double delta_hat) {
  check_box(lo, hi);
  if (!(a < b)) throw DomainError("Z(a, b, A) needs a < b");
  Region R;
  R.kind = Kind::Z_band;
  R.a = a;
  R.b = b;
  R.A_lo = std::move(lo);
  R.A_hi = std::move(hi);
  R.theta_hat = theta_hat;
  R.delta_hat = delta_hat;
  return R;
}

Region Region::Z0(double s, double sigma, double theta_hat, double delta_hat) {
  if (!(sigma >= 0) || !(s > 0)) throw DomainError("Z0(s, sigma) needs s > 0 and sigma >= 0");
  Region R;
  R.kind = Kind::Z0;
  R.s = s;
  R.sigma = sigma;
  R.theta_hat = theta_hat;
  R.delta_hat = delta_hat;
  return R;
}

Region Region::cone(double a, double b, std::vector<double> center, double radius) {
  if (!(a < b)) throw DomainError("cone needs a < b");
  double norm = 0;
  for (double v : center) norm += v * v;
  if (center.size() < 2 || std::abs(norm - 1) > 1e-9) throw DomainError("cone direction must be a unit tangent");
  Region R;
  R.kind = Kind::cone;
  R.a = a;
  R.b = b;
  R.B_center = std::move(center);
  R.B_radius = radius;
  return R;
}

double Region::width_scale() const {
  if (!(theta_hat > 0) || !(delta_hat > 0)) throw DomainError("region needs theta_hat > 0 and delta_hat > 0");
  return std::pow(theta_hat, -1.0 / delta_hat);
}

double ball_radius(int k, double sigma) {
  const double unit = std::pow(kPi, k / 2.0) / std::tgamma(k / 2.0 + 1);
  return std::pow(sigma / unit, 1.0 / k);
}

bool region_contains(const Region& R, const HPoint& z) {
  switch (R.kind) {
    case Region::Kind::Z:
      if (z.x.size() != R.A_lo.size()) throw DomainError("region and point dimensions differ");
      return z.y >= 1 && z.y < std::exp(R.s) && in_box(z.x, R.A_lo, R.A_hi, R.width_scale());
    case Region::Kind::Z_band:
      if (z.x.size() != R.A_lo.size()) throw DomainError("region and point dimensions differ");
      return z.y >= std::exp(R.a) && z.y <= std::exp(R.b) && in_box(z.x, R.A_lo, R.A_hi, R.width_scale());
    case Region::Kind::Z0: {
      double r2 = 0;
      for (double v : z.x) r2 += v * v;
      const double rho = R.width_scale() * ball_radius(static_cast<int>(z.x.size()), R.sigma);
      return z.y >= 1 && z.y <= std::exp(R.s) && std::sqrt(r2) <= rho;
    }
    case Region::Kind::cone: {
      const HPoint base = HPoint::base(z.n());
      if (static_cast<int>(R.B_center.size()) != z.n()) throw DomainError("cone and point dimensions differ");
      if (coord_distance(base, z) == 0.0) return false;
      const double d = hyp_distance(base, z);
      if (!(d > R.a && d <= R.b)) return false;
      const Direction dir = direction(base, z);
      double dot = 0;
      for (std::size_t j = 0; j < dir.tangent.size(); ++j) dot += dir.tangent[j] * R.B_center[j];
      return std::acos(std::clamp(dot, -1.0, 1.0)) <= R.B_radius;
    }
  }
  return false;
}

// ---- orbit data ----

double log_height(const HPoint& w) { return std::log(w.y); }

std::vector<GammaDatum> gamma_data(const GroupSpec& spec, const HPoint& w, double l_cutoff, const EnumOptions& opt) {
  if (spec.n != 2) throw DomainError("gamma data are defined for n = 2");
  const OrbitSlice slice = enumerate_ball(spec, w, w, l_cutoff, 0.0, opt);
  const MoebiusMap back = similarity_to(w).inverse();
  std::vector<GammaDatum> out;
  out.reserve(slice.points.size());
  for (const OrbitPoint& p : slice.points) {
    GammaDatum g;
    g.map = p.map;
    g.word = p.word;
    g.image = moebius_apply(back, p.point);
    const PolarCoords pc = polar_coords(g.image.x[0], g.image.y);
    g.l = pc.l;
    g.theta_rot = pc.theta;
    g.alpha = wrap_angle(2 * pc.theta);
    out.push_back(std::move(g));
  }
  return out;
}

bool e_gamma_contains(const GammaDatum& g, double r, double theta, double L, double theta_hat, double delta_hat) {
  const MoebiusMap m = geodesic_flow(2, -r) * rotation(theta + g.theta_rot);
  const HPoint q = moebius_apply(m, HPoint{{0.0}, std::exp(g.l)});
  return region_contains(Region::Z(INFINITY, {0.0}, {L}, theta_hat, delta_hat), q);
}

bool e_gamma_contains_closed(const GammaDatum& g, double r, double theta, double L, double theta_hat,
                             double delta_hat) {
  const double c = std::cos(2 * (theta + g.theta_rot)), s = std::sin(2 * (theta + g.theta_rot));
  const double den = std::cosh(g.l) - std::sinh(g.l) * c;
  const double im = std::exp(-r) / den;
  const double re = std::exp(-r) * std::sinh(g.l) * s / den;
  return im >= 1 && re >= 0 && re < std::pow(theta_hat, -1.0 / delta_hat) * L;
}

// ---- observer ----

ObserverNodes lattice_observer(int nodes) {
  if (nodes < 1) throw DomainError("lattice observer needs at least one node");
  ObserverNodes o;
  for (int k = 0; k < nodes; ++k) {
    o.alpha.push_back(kTwoPi * (k + 0.5) / nodes);
    o.weight.push_back(1.0 / nodes);
  }
  return o;
}

ObserverNodes observer_from_measure(const AtomicMeasure& nu) {
  if (nu.n != 2 || nu.observer != Observer::interior) throw DomainError("observer nodes need an interior n = 2 measure");
  ObserverNodes o;
  for (const Atom& a : nu.atoms) {
    o.alpha.push_back(wrap_angle(a.chart[0]));
    o.weight.push_back(a.weight);
  }
  return o;
}

ObserverNodes observer_shell(const GroupSpec& spec, const HPoint& w, double t_inner, double t_outer,
                             const EnumOptions& opt) {
  if (spec.n != 2) throw DomainError("observer nodes are defined for n = 2");
  if (!(t_inner >= 0 && t_inner < t_outer)) throw DomainError("observer shell needs 0 <= t_inner < t_outer");
  const OrbitSlice slice = enumerate_ball(spec, HPoint::base(2), w, t_outer, 0.0, opt);
  ObserverNodes o;
  for (const OrbitPoint& p : slice.points) {
    if (p.displacement < t_inner) continue;
    o.alpha.push_back(direction(w, p.point).angle);
    o.weight.push_back(1.0);
  }
  if (o.alpha.empty()) throw DomainError("observer shell holds no orbit points");
  return o;
}

AtomicMeasure observer_measure(const GroupSpec& spec, const HPoint& w, double s, double t_truncate,
                               const EnumOptions& opt) {
  const OrbitSlice slice = enumerate_ball(spec, HPoint::base(spec.n), w, t_truncate, 0.0, opt);
  const MoebiusMap back = similarity_to(w).inverse();
  std::vector<HPoint> pts;
  for (const OrbitPoint& p : slice.points) pts.push_back(moebius_apply(back, p.point));
  return atoms_from_points(pts, s, t_truncate);
}

// ---- the depth sweep ----
//
// Put the typical orbit point at i and the observer far away in direction
// alpha. With beta = alpha_gamma - alpha and den = cosh l - sinh l cos beta,
// the datum sits at X = e^y sinh l sin beta / den, Y = e^y / den, where y >= 0
// is the depth of the typical point below the counting horizon (density
// delta e^{-delta y}). It is counted when Y >= 1 and it is within L of the
// typical point when |X| < kappa L with kappa = pi theta^{-1/delta}; the
// circle of directions has circumference 1 and angles move at rate 2.
// So each datum excludes the depth interval [log den, log(kappa L den / |sinh l sin beta|)).

namespace {

enum class Side { next, both };

struct Entry {
  double a, c;  // interval [a, c + log L)
};

struct SweepResult {
  std::vector<double> empty_mass;    // per L: integral of the weight over depths with no datum in the window
  std::vector<double> end_density;   // per L: sum over moving right ends b of delta e^{-delta b}, times 1/L
  std::vector<double> pair_mass;     // per L: sum over data of the weight over their intervals
  std::vector<double> tail_mass;     // per L: empty mass in the last 10% of the depth range
};

struct Band {
  // windows in beta: |beta| <= near, |beta - pi| <= far (far < 0: none); near >= pi scans all
  double near = kPi, far = -1;
  std::vector<double> alpha;        // sorted
  std::vector<std::size_t> index;
};

void check_options(const LimitOptions& opt) {
  if (!(opt.delta_hat > 0) || !(opt.theta_hat > 0)) throw DomainError("limits need delta_hat > 0 and theta_hat > 0");
  if (!(opt.y_max > 0)) throw DomainError("limits need y_max > 0");
  if (opt.y_max > opt.l_cutoff - opt.margin)
    throw DomainError("y_max exceeds l_cutoff - margin: the truncated orbit data are not trusted that deep");
}

double weight_mass(double delta, double lo, double hi) {
  if (!(hi > lo)) return 0;
  return std::exp(-delta * lo) - std::exp(-delta * hi);
}

SweepResult sweep(const std::vector<GammaDatum>& data, const ObserverNodes& nu, const std::vector<double>& L,
                  const LimitOptions& opt, Side side) {
  check_options(opt);
  if (nu.alpha.size() != nu.weight.size() || nu.alpha.empty()) throw DomainError("observer nodes are empty");
  for (double x : L)
    if (!(x >= 0)) throw DomainError("window sizes must be nonnegative");
  const double kappa = kPi * std::pow(opt.theta_hat, -1.0 / opt.delta_hat);
  const double delta = opt.delta_hat, ymax = opt.y_max, ey = std::exp(ymax);

  // Bands by integer part of l. A datum matters only if den < e^{y_max} (it is
  // counted at some depth) and |sinh l sin beta| < kappa L (its interval is
  // nonempty); for |beta| < pi/2 both bound |beta|.
  const double Lmax = L.empty() ? 0.0 : *std::max_element(L.begin(), L.end());
  std::vector<Band> bands;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto k = static_cast<std::size_t>(std::max(0.0, std::floor(data[i].l)));
    if (k >= bands.size()) bands.resize(k + 1);
    bands[k].index.push_back(i);
  }
  for (std::size_t k = 0; k < bands.size(); ++k) {
    Band& b = bands[k];
    const double l = static_cast<double>(k);
    const double cmin = l > 0 ? (std::cosh(l) - ey) / std::sinh(l) : -2.0;
    const double w_den = cmin <= -1 ? kPi : std::acos(std::min(1.0, cmin));
    const double w_sin = l > 0 ? std::asin(std::min(1.0, kappa * Lmax / std::sinh(l))) : kPi / 2;
    if (w_sin >= kPi / 2) {
      b.near = w_den;
    } else {
      b.near = std::min(w_den, w_sin);
      if (w_den > kPi - w_sin) b.far = w_sin;
      if (b.far >= 0 && b.near + b.far >= kPi) b.near = kPi;
    }
    b.near += 1e-12;
    if (b.far >= 0) b.far += 1e-12;
    std::sort(b.index.begin(), b.index.end(), [&](std::size_t x, std::size_t y) { return data[x].alpha < data[y].alpha; });
    for (std::size_t i : b.index) b.alpha.push_back(data[i].alpha);
  }

  std::vector<double> logL(L.size());
  for (std::size_t j = 0; j < L.size(); ++j) logL[j] = L[j] > 0 ? std::log(L[j]) : -INFINITY;
  const std::size_t nL = L.size(), nodes = nu.alpha.size();
  std::vector<double> per_node(nodes * nL * 4, 0.0);
  const double y_tail = 0.9 * ymax;

  parallel_for(nodes, opt.threads, [&](std::size_t k) {
    const double alpha = nu.alpha[k];
    std::vector<Entry> entries;
    auto consider = [&](std::size_t i) {
      const GammaDatum& g = data[i];
      const double beta = centered_angle(g.alpha - alpha);
      const double sh = std::sinh(g.l);
      const double den = std::cosh(g.l) - sh * std::cos(beta);
      if (!(den < ey)) return;
      const double sx = sh * std::sin(beta);
      if (side == Side::next && sx > 0) return;
      const double ax = std::abs(sx);
      const double c = ax > 0 ? std::log(kappa * den / ax) : INFINITY;
      entries.push_back({std::log(den), c});
    };
    for (const Band& b : bands) {
      if (b.alpha.empty()) continue;
      if (b.near >= kPi) {
        for (std::size_t i : b.index) consider(i);
        continue;
      }
      auto scan = [&](double lo, double hi) {
        auto it = std::lower_bound(b.alpha.begin(), b.alpha.end(), lo);
        for (; it != b.alpha.end() && *it <= hi; ++it) consider(b.index[it - b.alpha.begin()]);
      };
      auto window = [&](double center, double half) {
        const double lo = center - half, hi = center + half;
        scan(std::max(lo, 0.0), std::min(hi, kTwoPi));
        if (lo < 0) scan(lo + kTwoPi, kTwoPi);
        if (hi > kTwoPi) scan(0.0, hi - kTwoPi);
      };
      window(alpha, b.near);
      if (b.far >= 0) window(wrap_angle(alpha + kPi), b.far);
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.a < y.a; });

    const double w = nu.weight[k];
    for (std::size_t j = 0; j < nL; ++j) {
      double covered = 0, tail_covered = 0, ends = 0, pairs = 0;
      double cur_lo = 0, cur_hi = -INFINITY;
      bool open = false, cur_moves = false;
      auto close = [&]() {
        if (!open) return;
        const double lo = std::max(cur_lo, 0.0), hi = std::min(cur_hi, ymax);
        covered += weight_mass(delta, lo, hi);
        tail_covered += weight_mass(delta, std::max(lo, y_tail), hi);
        if (cur_moves && cur_hi > 0 && cur_hi < ymax) ends += delta * std::exp(-delta * cur_hi);
        open = false;
      };
      for (const Entry& e : entries) {
        if (e.a >= ymax) break;
        const double b = e.c + logL[j];
        if (!(b > e.a) || !(b > 0)) continue;
        pairs += weight_mass(delta, std::max(e.a, 0.0), std::min(b, ymax));
        if (open && e.a <= cur_hi) {
          if (b > cur_hi) {
            cur_hi = b;
            cur_moves = std::isfinite(e.c);
          }
        } else {
          close();
          open = true;
          cur_lo = e.a;
          cur_hi = b;
          cur_moves = std::isfinite(e.c);
        }
      }
      close();
      double* out = &per_node[(k * nL + j) * 4];
      out[0] = w * (weight_mass(delta, 0, ymax) - covered);
      out[1] = L[j] > 0 ? w * ends / L[j] : 0;
      out[2] = w * pairs;
      out[3] = w * (weight_mass(delta, y_tail, ymax) - tail_covered);
    }
  });

  SweepResult r;
  r.empty_mass.assign(nL, 0);
  r.end_density.assign(nL, 0);
  r.pair_mass.assign(nL, 0);
  r.tail_mass.assign(nL, 0);
  for (std::size_t k = 0; k < nodes; ++k)
    for (std::size_t j = 0; j < nL; ++j) {
      const double* v = &per_node[(k * nL + j) * 4];
      r.empty_mass[j] += v[0];
      r.end_density[j] += v[1];
      r.pair_mass[j] += v[2];
      r.tail_mass[j] += v[3];
    }
  return r;
}

double total_weight(const ObserverNodes& nu) {
  double s = 0;
  for (double w : nu.weight) s += w;
  return s;
}

void note_data(LimitCurve& c, const std::vector<GammaDatum>& data) {
  if (data.empty()) c.warnings.push_back("no orbit data: the product over gamma is empty and the curve is constant");
}

void finish_empty_curve(LimitCurve& c, const SweepResult& r, const ObserverNodes& nu, const LimitOptions& opt) {
  // reference: no datum excludes anything
  const double reference = total_weight(nu) * weight_mass(opt.delta_hat, 0, opt.y_max);
  c.prefactor = 1.0 / reference;
  c.raw = r.empty_mass;
  double worst = 0;
  for (std::size_t j = 0; j < c.abscissae.size(); ++j) {
    c.values.push_back(c.prefactor * c.raw[j]);
    if (c.raw[j] > 0) worst = std::max(worst, r.tail_mass[j] / c.raw[j]);
  }
  c.tail_fraction = worst;
  if (worst > 0.05) c.warnings.push_back("more than 5% of the integrand sits in the last tenth of the depth range");
}

}  // namespace

LimitCurve gap_limit_cdf(const std::vector<GammaDatum>& data, const ObserverNodes& nu, const std::vector<double>& L,
                         const LimitOptions& opt) {
  const SweepResult r = sweep(data, nu, L, opt, Side::next);
  LimitCurve c;
  c.kind = StatKind::gap_cdf;
  c.abscissae = L;
  note_data(c, data);
  finish_empty_curve(c, r, nu, opt);
  return c;
}

LimitCurve nearest_neighbor_limit(const std::vector<GammaDatum>& data, const ObserverNodes& nu,
                                  const std::vector<double>& L, const LimitOptions& opt) {
  const SweepResult r = sweep(data, nu, L, opt, Side::both);
  LimitCurve c;
  c.kind = StatKind::nn_cdf;
  c.abscissae = L;
  note_data(c, data);
  finish_empty_curve(c, r, nu, opt);
  return c;
}

DensityValue gap_limit_density(const std::vector<GammaDatum>& data, const ObserverNodes& nu, double L,
                               const LimitOptions& opt) {
  const double h = opt.fd_step;
  if (!(L > h)) throw DomainError("gap density needs L > fd_step");
  const SweepResult r = sweep(data, nu, {L - h, L, L + h}, opt, Side::next);
  const double reference = total_weight(nu) * weight_mass(opt.delta_hat, 0, opt.y_max);
  DensityValue v;
  v.raw_formula = r.end_density[1];
  v.formula = r.end_density[1] / reference;
  v.finite_difference = -(r.empty_mass[2] - r.empty_mass[0]) / (2 * h) / reference;
  return v;
}

LimitCurve gap_limit_density_curve(const std::vector<GammaDatum>& data, const ObserverNodes& nu,
                                   const std::vector<double>& L, const LimitOptions& opt) {
  const double h = opt.fd_step;
  std::vector<double> all;
  for (double x : L) {
    if (!(x > h)) throw DomainError("gap density needs L > fd_step");
    all.insert(all.end(), {x - h, x, x + h});
  }
  const SweepResult r = sweep(data, nu, all, opt, Side::next);
  const double reference = total_weight(nu) * weight_mass(opt.delta_hat, 0, opt.y_max);
  LimitCurve c;
  c.kind = StatKind::gap_density;
  c.abscissae = L;
  c.prefactor = 1.0 / reference;
  note_data(c, data);
  for (std::size_t j = 0; j < L.size(); ++j) {
    c.raw.push_back(r.end_density[3 * j + 1]);
    c.values.push_back(c.prefactor * c.raw.back());
    c.check.push_back(-(r.empty_mass[3 * j + 2] - r.empty_mass[3 * j]) / (2 * h) * c.prefactor);
  }
  return c;
}

LimitCurve pair_correlation_limit(const std::vector<GammaDatum>& data, const ObserverNodes& nu,
                                  const std::vector<double>& xi, const LimitOptions& opt, double calibration_xi,
                                  double calibration_value) {
  std::vector<double> all = xi;
  const bool calibrate = calibration_xi > 0;
  if (calibrate) all.push_back(calibration_xi);
  const SweepResult r = sweep(data, nu, all, opt, Side::both);
  LimitCurve c;
  c.kind = StatKind::pair_correlation;
  c.abscissae = xi;
  note_data(c, data);
  // per typical point: divide by the observer mass and the depth weight
  const double reference = total_weight(nu) * weight_mass(opt.delta_hat, 0, opt.y_max);
  for (std::size_t j = 0; j < xi.size(); ++j) c.raw.push_back(r.pair_mass[j] / reference);
  c.prefactor = 1;
  if (calibrate) {
    const double at = r.pair_mass.back() / reference;
    if (!(at > 0)) throw DomainError("pair correlation vanishes at the calibration point");
    c.prefactor = calibration_value / at;
  }
  for (double v : c.raw) c.values.push_back(c.prefactor * v);
  return c;
}

ScaledDistribution LimitCurve::to_distribution() const {
  ScaledDistribution d;
  d.kind = kind;
  d.abscissae = abscissae;
  d.values = values;
  d.stderr_.assign(values.size(), 0.0);
  d.warnings = warnings;
  return d;
}

}  // namespace hyperlab
