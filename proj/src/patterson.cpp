#include "hyperlab/patterson.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "hyperlab/error.hpp"

namespace hyperlab {

namespace {

constexpr double kEdgeTol = 1e-12;
constexpr double kTwoPi = 2 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0 ? a + kTwoPi : a;
}

void normalize(AtomicMeasure& m) {
  double total = 0;
  for (const Atom& a : m.atoms) total += a.weight;
  if (!(total > 0)) throw DomainError("Patterson sum is empty");
  for (Atom& a : m.atoms) a.weight /= total;
  m.total_mass = 1.0;
}

// 1 inside, 0 outside, 1/2 on the edge.
double membership(const AtomicMeasure& m, const Atom& a, const MeasureSet& F) {
  using K = MeasureSet::Kind;
  switch (F.kind) {
    case K::empty: return 0.0;
    case K::full: return 1.0;
    case K::arc: {
      if (m.n != 2 || m.observer != Observer::interior) throw DomainError("arcs need the n = 2 interior chart");
      const double len = F.arc_end - F.arc_start;
      if (len >= kTwoPi) return 1.0;
      if (len <= 0) return 0.0;
      const double u = wrap_angle(a.chart[0] - F.arc_start);
      const double dist_end = std::min(std::abs(u - len), std::min(u, kTwoPi - u));
      if (dist_end <= kEdgeTol) return 0.5;
      return u < len ? 1.0 : 0.0;
    }
    case K::box: {
      bool edge = false;
      for (std::size_t j = 0; j < F.lo.size(); ++j) {
        const double x = a.chart.at(j);
        if (x < F.lo[j] - kEdgeTol || x > F.hi[j] + kEdgeTol) return 0.0;
        edge = edge || std::abs(x - F.lo[j]) <= kEdgeTol || std::abs(x - F.hi[j]) <= kEdgeTol;
      }
      return edge ? 0.5 : 1.0;
    }
    case K::ball: {
      double r2 = 0;
      for (std::size_t j = 0; j < F.center.size(); ++j) r2 += (a.chart.at(j) - F.center[j]) * (a.chart.at(j) - F.center[j]);
      const double r = std::sqrt(r2);
      if (std::abs(r - F.radius) <= kEdgeTol) return 0.5;
      return r < F.radius ? 1.0 : 0.0;
    }
  }
  return 0.0;
}

}  // namespace

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("fit_line needs at least two paired samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) throw DomainError("fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    f.slope_stderr = std::sqrt(rss / (n - 2) / sxx);
  }
  return f;
}

FitReport fit_delta(const std::vector<std::pair<double, double>>& counts) {
  if (counts.size() < 4) throw DomainError("fit_delta needs at least 4 samples");
  std::vector<double> t, logn;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto [ti, ni] = counts[i];
    if (!(ni > 0)) throw DomainError("fit_delta: counts must be positive");
    if (i > 0 && !(ti > counts[i - 1].first)) throw DomainError("fit_delta: t must increase");
    if (i > 0 && ni < counts[i - 1].second) throw DomainError("fit_delta: counts are not monotone");
    t.push_back(ti);
    logn.push_back(std::log(ni));
  }
  const LineFit f = fit_line(t, logn);
  FitReport r;
  r.delta_hat = f.slope;
  r.slope_stderr = f.slope_stderr;
  r.counting_constant_hat = std::exp(f.intercept);
  r.t_min = t.front();
  r.t_max = t.back();
  r.samples = counts.size();
  if (!(r.delta_hat > 0)) throw DomainError("fit_delta: fitted exponent is not positive");
  return r;
}

AtomicMeasure AtomicMeasure::scaled(double factor) const {
  AtomicMeasure m = *this;
  for (Atom& a : m.atoms) a.weight *= factor;
  m.total_mass *= factor;
  return m;
}

AtomicMeasure atoms_from_points(const std::vector<HPoint>& points, double s, double t_truncate) {
  if (points.empty()) throw DomainError("atoms_from_points: no points");
  AtomicMeasure m;
  m.n = points.front().n();
  m.observer = Observer::interior;
  m.s_parameter = s;
  m.base_orbit_t = t_truncate;
  const HPoint base = HPoint::base(m.n);
  for (const HPoint& p : points) {
    const double d = hyp_distance(base, p);
    if (d == 0.0) continue;  // no direction from i to itself
    const Direction dir = direction(base, p);
    Atom a;
    a.position = dir.endpoint;
    a.chart = m.n == 2 ? std::vector<double>{dir.angle} : dir.endpoint.x;
    a.weight = std::exp(-s * d);
    m.atoms.push_back(std::move(a));
  }
  normalize(m);
  return m;
}

AtomicMeasure patterson_atoms(const GroupSpec& spec, const HPoint& w, double s, double t_truncate,
                              Observer observer, double delta_hat, const EnumOptions& opt) {
  if (!(s > delta_hat)) throw DomainError("patterson_atoms needs s > delta_hat (the series diverges otherwise)");
  if (observer == Observer::interior) {
    const OrbitSlice slice = enumerate_ball(spec, w, HPoint::base(spec.n), t_truncate, 0.0, opt);
    // s = 0 keeps every orbit point in the ball; i itself is dropped in atoms_from_points.
    std::vector<HPoint> pts;
    pts.reserve(slice.points.size());
    for (const OrbitPoint& p : slice.points) pts.push_back(p.point);
    return atoms_from_points(pts, s, t_truncate);
  }
  const OrbitSlice slice = enumerate_horoball(spec, w, t_truncate, INFINITY, opt);
  AtomicMeasure m;
  m.n = spec.n;
  m.observer = Observer::boundary;
  m.s_parameter = s;
  m.base_orbit_t = t_truncate;
  m.lattice = spec.cusp;
  for (const OrbitPoint& p : slice.points) {
    Atom a;
    a.position = BoundaryPoint::finite(p.point.x);
    a.chart = p.point.x;
    a.weight = std::pow(p.point.y, s);
    m.atoms.push_back(std::move(a));
  }
  normalize(m);
  return m;
}

MeasureSet MeasureSet::arc(double a, double b) {
  MeasureSet F;
  F.kind = Kind::arc;
  F.arc_start = a;
  F.arc_end = b;
  return F;
}

MeasureSet MeasureSet::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size()) throw DomainError("box corners differ in dimension");
  MeasureSet F;
  F.kind = Kind::box;
  F.lo = std::move(lo);
  F.hi = std::move(hi);
  return F;
}

MeasureSet MeasureSet::ball(std::vector<double> center, double radius) {
  MeasureSet F;
  F.kind = Kind::ball;
  F.center = std::move(center);
  F.radius = radius;
  return F;
}

double nu_eval(const AtomicMeasure& m, const MeasureSet& F) {
  double s = 0;
  for (const Atom& a : m.atoms) s += a.weight * membership(m, a, F);
  return s;
}

double integrate_density(const AtomicMeasure& m, const std::function<double(const Atom&)>& density) {
  double s = 0;
  for (const Atom& a : m.atoms) s += a.weight * density(a);
  return s;
}

double fit_theta(const FitReport& counting, const AtomicMeasure& nu, const MeasureSet& F_ref) {
  const double mass = nu_eval(nu, F_ref);
  if (!(mass > 0)) throw DomainError("fit_theta: reference set has zero measure");
  return counting.counting_constant_hat / mass;
}

void write_measure_csv(std::ostream& os, const AtomicMeasure& m) {
  os.precision(17);
  os << "# observer=" << (m.observer == Observer::interior ? "interior" : "boundary") << " s=" << m.s_parameter
     << " t_truncate=" << m.base_orbit_t << " atoms=" << m.atoms.size() << " total_mass=" << m.total_mass << "\n";
  os << "position,weight\n";
  for (const Atom& a : m.atoms) {
    for (std::size_t j = 0; j < a.chart.size(); ++j) os << (j ? " " : "") << a.chart[j];
    os << "," << a.weight << "\n";
  }
}

void write_fit_json(std::ostream& os, const FitReport& r) {
  nlohmann::json j = {{"delta_hat", r.delta_hat},
                      {"slope_stderr", r.slope_stderr},
                      {"counting_constant_hat", r.counting_constant_hat},
                      {"theta_hat", r.theta_hat},
                      {"window", {r.t_min, r.t_max}},
                      {"samples", r.samples}};
  os << j.dump(2) << "\n";
}

}  // namespace hyperlab
