#include "hyperlab/hyperbolic.hpp"

#include <cmath>
#include <numbers>

#include "hyperlab/error.hpp"

namespace hyperlab {

namespace {

constexpr double kPoleTol = 1e-12;

CliffordNumber vec(int m, const std::vector<double>& v) { return CliffordNumber::vector(m, v); }

void check_n(int n) {
  if (n < 2 || n - 1 > kMaxCliffordDim) throw DomainError("unsupported dimension n = " + std::to_string(n));
}

// Half-space point as the Clifford vector x + y i_{n-1} of C_{n-1}.
CliffordNumber lift(const HPoint& z) {
  std::vector<double> coords = z.x;
  coords.push_back(z.y);
  return vec(z.n() - 1, coords);
}

// Integral of sin^k over [0, rho] by composite Simpson.
double sin_power_integral(int k, double rho) {
  const int steps = 4000;
  const double h = rho / steps;
  double s = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * std::pow(std::sin(i * h), k);
  }
  return s * h / 3.0;
}

}  // namespace

MoebiusMap MoebiusMap::identity(int n) {
  check_n(n);
  const int m = entry_algebra(n);
  return {n, CliffordNumber::scalar(m, 1.0), CliffordNumber(m), CliffordNumber(m),
          CliffordNumber::scalar(m, 1.0)};
}

MoebiusMap MoebiusMap::from_entries(int n, CliffordNumber a, CliffordNumber b, CliffordNumber c,
                                    CliffordNumber d) {
  check_n(n);
  const int m = entry_algebra(n);
  if (a.dim() != m || b.dim() != m || c.dim() != m || d.dim() != m)
    throw DomainError("matrix entries must lie in C_" + std::to_string(m));
  return {n, a, b, c, d};
}

MoebiusMap MoebiusMap::real(double a, double b, double c, double d) {
  return {2, CliffordNumber::scalar(0, a), CliffordNumber::scalar(0, b),
          CliffordNumber::scalar(0, c), CliffordNumber::scalar(0, d)};
}

MoebiusMap MoebiusMap::complex(std::complex<double> a, std::complex<double> b,
                               std::complex<double> c, std::complex<double> d) {
  auto cn = [](std::complex<double> v) { return CliffordNumber::vector(1, {v.real(), v.imag()}); };
  return {3, cn(a), cn(b), cn(c), cn(d)};
}

CliffordNumber MoebiusMap::pseudo_det() const { return a * star(d) - b * star(c); }

std::optional<std::string> MoebiusMap::vahlen_violation(double tol) const {
  const std::pair<const char*, const CliffordNumber*> entries[] = {
      {"a", &a}, {"b", &b}, {"c", &c}, {"d", &d}};
  for (const auto& [name, e] : entries) {
    const CliffordNumber p = (*e) * bar(*e);
    if (!p.is_scalar(tol * std::max(1.0, norm_sq(*e))))
      return std::string("entry ") + name + " is not in the Clifford group";
  }
  const std::pair<const char*, CliffordNumber> products[] = {
      {"a*star(b)", a * star(b)},
      {"c*star(d)", c * star(d)},
      {"star(c)*a", star(c) * a},
      {"star(d)*b", star(d) * b}};
  for (const auto& [name, p] : products)
    if (!p.is_vector(tol * std::max(1.0, norm(p)))) return std::string(name) + " is not a Clifford vector";
  const CliffordNumber det = pseudo_det();
  if (!det.is_scalar(tol * std::max(1.0, norm(det))))
    return std::string("pseudo-determinant a*star(d) - b*star(c) is not real");
  if (std::abs(det.scalar_part()) <= tol) return std::string("pseudo-determinant vanishes");
  return std::nullopt;
}

MoebiusMap MoebiusMap::normalized() const {
  const CliffordNumber det = pseudo_det();
  if (!det.is_scalar(1e-9 * std::max(1.0, norm(det))))
    throw DomainError("pseudo-determinant is not real");
  const double delta = det.scalar_part();
  if (!(delta > 0.0)) throw DomainError("pseudo-determinant is not positive");
  const double s = 1.0 / std::sqrt(delta);
  return {n, a * s, b * s, c * s, d * s};
}

MoebiusMap MoebiusMap::inverse() const {
  // Valid for pseudo-determinant 1.
  return {n, star(d), -star(b), -star(c), star(a)};
}

double MoebiusMap::distance_to(const MoebiusMap& o) const {
  const double plus = std::max({max_abs_diff(a, o.a), max_abs_diff(b, o.b), max_abs_diff(c, o.c),
                                max_abs_diff(d, o.d)});
  const double minus = std::max({max_abs_diff(a, -o.a), max_abs_diff(b, -o.b),
                                 max_abs_diff(c, -o.c), max_abs_diff(d, -o.d)});
  return std::min(plus, minus);
}

MoebiusMap operator*(const MoebiusMap& g, const MoebiusMap& h) {
  if (g.n != h.n) throw DomainError("composing maps of different dimension");
  return {g.n, g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d, g.c * h.a + g.d * h.c,
          g.c * h.b + g.d * h.d};
}

HPoint moebius_apply(const MoebiusMap& g, const HPoint& z) {
  if (z.n() != g.n) throw DomainError("point and map dimensions differ");
  const int m = g.n - 1;
  if (g.n == 2) {
    // Real entries: plain complex arithmetic.
    const std::complex<double> w(z.x[0], z.y);
    const std::complex<double> r = (g.a[0] * w + g.b[0]) / (g.c[0] * w + g.d[0]);
    return {{r.real()}, r.imag()};
  }
  const CliffordNumber u = lift(z);
  const CliffordNumber num = embed(g.a, m) * u + embed(g.b, m);
  const CliffordNumber den = embed(g.c, m) * u + embed(g.d, m);
  const CliffordNumber r = num * clifford_group_inverse(den);
  HPoint out;
  out.x.resize(g.n - 1);
  for (int j = 0; j < g.n - 1; ++j) out.x[j] = r.vector_coord(j);
  out.y = r.vector_coord(g.n - 1);
  return out;
}

BoundaryPoint moebius_apply(const MoebiusMap& g, const BoundaryPoint& xi) {
  if (xi.n() != g.n) throw DomainError("point and map dimensions differ");
  const int m = g.n - 2;
  CliffordNumber r(m);
  if (xi.infinite) {
    if (norm(g.c) < kPoleTol) return BoundaryPoint::at_infinity(g.n);
    r = g.a * clifford_group_inverse(g.c);
  } else {
    const CliffordNumber u = vec(m, xi.x);
    const CliffordNumber den = g.c * u + g.d;
    if (norm(den) < kPoleTol) return BoundaryPoint::at_infinity(g.n);
    r = (g.a * u + g.b) * clifford_group_inverse(den);
  }
  BoundaryPoint out;
  out.x.resize(g.n - 1);
  for (int j = 0; j < g.n - 1; ++j) out.x[j] = r.vector_coord(j);
  return out;
}

double coord_distance(const HPoint& z1, const HPoint& z2) {
  double s = (z1.y - z2.y) * (z1.y - z2.y);
  for (std::size_t j = 0; j < z1.x.size(); ++j) s += (z1.x[j] - z2.x[j]) * (z1.x[j] - z2.x[j]);
  return std::sqrt(s);
}

double hyp_distance(const HPoint& z1, const HPoint& z2) {
  if (z1.n() != z2.n()) throw DomainError("distance between points of different dimension");
  return 2.0 * std::asinh(coord_distance(z1, z2) / (2.0 * std::sqrt(z1.y * z2.y)));
}

double busemann(const BoundaryPoint& xi, const HPoint& x, const HPoint& y) {
  if (xi.infinite) return std::log(y.y / x.y);
  const MoebiusMap h = send_to_infinity(xi);
  return std::log(moebius_apply(h, y).y / moebius_apply(h, x).y);
}

MoebiusMap translation(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size()) + 1;
  MoebiusMap g = MoebiusMap::identity(n);
  g.b = vec(entry_algebra(n), v);
  return g;
}

MoebiusMap geodesic_flow(int n, double t) {
  MoebiusMap g = MoebiusMap::identity(n);
  g.a[0] = std::exp(t / 2);
  g.d[0] = std::exp(-t / 2);
  return g;
}

MoebiusMap rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return MoebiusMap::real(c, -s, s, c);
}

MoebiusMap rotation_chart(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size()) + 1;
  double r = 0.0;
  for (double v : x) r += v * v;
  r = std::sqrt(r);
  if (r >= std::numbers::pi / 2) throw DomainError("rotation chart needs |x| < pi/2");
  MoebiusMap g = MoebiusMap::identity(n);
  if (r == 0.0) return g;
  const int m = entry_algebra(n);
  std::vector<double> unit(x);
  for (double& v : unit) v /= r;
  g.a = CliffordNumber::scalar(m, std::cos(r));
  g.d = g.a;
  g.b = vec(m, unit) * std::sin(r);
  g.c = -prime(g.b);
  return g;
}

MoebiusMap similarity_to(const HPoint& z) {
  const int n = z.n();
  const double r = std::sqrt(z.y);
  MoebiusMap g = MoebiusMap::identity(n);
  g.a[0] = r;
  g.d[0] = 1.0 / r;
  g.b = vec(entry_algebra(n), z.x) * (1.0 / r);
  return g;
}

MoebiusMap send_to_infinity(const BoundaryPoint& xi) {
  if (xi.infinite) return MoebiusMap::identity(xi.n());
  const int n = xi.n();
  const int m = entry_algebra(n);
  const MoebiusMap flip{n, CliffordNumber(m), CliffordNumber::scalar(m, -1.0),
                        CliffordNumber::scalar(m, 1.0), CliffordNumber(m)};
  std::vector<double> minus(xi.x);
  for (double& v : minus) v = -v;
  return flip * translation(minus);
}

PolarCoords polar_coords(double re, double im) {
  const double ch = 1.0 + (re * re + (im - 1.0) * (im - 1.0)) / (2.0 * im);
  PolarCoords p;
  p.l = std::acosh(ch);
  if (p.l < 1e-15) return p;
  const double sh = std::sinh(p.l);
  p.theta = 0.5 * std::atan2(re / (im * sh), (ch - 1.0 / im) / sh);
  return p;
}

std::pair<double, double> rotated_lift(double l, double theta) {
  const double den = std::cosh(l) - std::sinh(l) * std::cos(2 * theta);
  return {std::sin(2 * theta) * std::sinh(l) / den, 1.0 / den};
}

Direction direction(const HPoint& z, const HPoint& w) {
  const int n = z.n();
  if (w.n() != n) throw DomainError("direction between points of different dimension");
  if (coord_distance(z, w) == 0.0) throw DomainError("direction_function: w equals z");
  // Normalize z to i, then work in the vertical plane through i and w.
  std::vector<double> rel(n - 1);
  for (int j = 0; j < n - 1; ++j) rel[j] = (w.x[j] - z.x[j]) / z.y;
  std::vector<double> unit(n - 1, 0.0);
  double rho = 0.0;
  if (n == 2) {
    rho = rel[0];
    unit[0] = 1.0;
  } else {
    for (double v : rel) rho += v * v;
    rho = std::sqrt(rho);
    if (rho > 0) {
      for (int j = 0; j < n - 1; ++j) unit[j] = rel[j] / rho;
    } else {
      unit[0] = 1.0;
    }
  }
  const PolarCoords pc = polar_coords(rho, w.y / z.y);
  const double alpha = 2.0 * pc.theta;
  const auto [re1, im1] = rotated_lift(1.0, pc.theta);

  Direction out;
  out.point.x.resize(n - 1);
  for (int j = 0; j < n - 1; ++j) out.point.x[j] = z.x[j] + z.y * re1 * unit[j];
  out.point.y = z.y * im1;
  out.tangent.resize(n);
  for (int j = 0; j < n - 1; ++j) out.tangent[j] = std::sin(alpha) * unit[j];
  out.tangent[n - 1] = std::cos(alpha);
  out.angle = std::fmod(alpha + 2 * std::numbers::pi, 2 * std::numbers::pi);
  const double s = std::sin(pc.theta);
  if (s == 0.0) {
    out.endpoint = BoundaryPoint::at_infinity(n);
  } else {
    const double cot = std::cos(pc.theta) / s;
    out.endpoint.x.resize(n - 1);
    for (int j = 0; j < n - 1; ++j) out.endpoint.x[j] = z.x[j] + z.y * cot * unit[j];
  }
  return out;
}

HPoint direction_function(const HPoint& z, const HPoint& w) { return direction(z, w).point; }

std::vector<double> direction_chart(const BoundaryPoint& endpoint) {
  if (endpoint.infinite) throw DomainError("direction toward infinity lies outside the chart");
  double r = 0.0;
  for (double v : endpoint.x) r += v * v;
  r = std::sqrt(r);
  std::vector<double> x(endpoint.x.size(), 0.0);
  if (r == 0.0) return x;
  const double scale = -std::atan(r) / r;
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = scale * endpoint.x[j];
  return x;
}

double polar_weight(const MoebiusMap& k) {
  const double tol = 1e-9;
  if (max_abs_diff(k.c, -prime(k.b)) > tol || max_abs_diff(k.d, prime(k.a)) > tol)
    throw DomainError("polar_weight: matrix is not in block form (a, b; -b', a')");
  const CliffordNumber det = k.pseudo_det();
  if (!det.is_scalar(tol) || std::abs(det.scalar_part() - 1.0) > tol)
    throw DomainError("polar_weight: matrix is not unitary");
  return std::pow(norm(k.a), k.n - 1);
}

double boundary_derivative(const MoebiusMap& g, const BoundaryPoint& xi) {
  if (xi.infinite) throw DomainError("boundary_derivative at infinity");
  const CliffordNumber u = vec(g.n - 2, xi.x);
  const CliffordNumber den = g.c * u + g.d;
  return g.pseudo_det().scalar_part() / norm_sq(den);
}

double cap_fraction(int n, double rho) {
  if (rho <= 0) return 0.0;
  if (rho >= std::numbers::pi) return 1.0;
  switch (n) {
    case 2: return rho / std::numbers::pi;
    case 3: return (1.0 - std::cos(rho)) / 2.0;
    case 4: return (2 * rho - std::sin(2 * rho)) / (2 * std::numbers::pi);
    default: return sin_power_integral(n - 2, rho) / sin_power_integral(n - 2, std::numbers::pi);
  }
}

double cap_radius(int n, double fraction) {
  if (!(fraction > 0.0) || fraction >= 1.0) throw DomainError("cap fraction must lie in (0, 1)");
  if (n == 2) return fraction * std::numbers::pi;
  if (n == 3) return std::acos(1.0 - 2.0 * fraction);
  double lo = 0.0, hi = std::numbers::pi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cap_fraction(n, mid) < fraction ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace hyperlab
