#include "hyperlab/pointsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "hyperlab/error.hpp"

namespace hyperlab {

DirectionSet project_directions(const OrbitSlice& slice, const HPoint& z) {
  if (slice.mode != OrbitMode::ball) throw DomainError("project_directions needs a ball-mode slice");
  if (coord_distance(slice.z, z) > 1e-12) throw DomainError("project_directions: observer differs from the slice center");
  DirectionSet out;
  out.n = z.n();
  out.z = z;
  out.t = slice.t;
  out.s = slice.s;
  out.points.reserve(slice.points.size());
  for (const OrbitPoint& p : slice.points) {
    const Direction d = direction(z, p.point);
    DirectionPoint dp{d.point, d.tangent, {}};
    if (out.n == 2) {
      dp.chart = {d.angle};
    } else if (d.endpoint.infinite) {
      dp.chart.assign(out.n - 1, std::numeric_limits<double>::quiet_NaN());
    } else {
      BoundaryPoint rel = d.endpoint;
      for (int j = 0; j < out.n - 1; ++j) rel.x[j] = (rel.x[j] - z.x[j]) / z.y;
      dp.chart = direction_chart(rel);
    }
    out.points.push_back(std::move(dp));
  }
  return out;
}

BoundarySet project_boundary(const OrbitSlice& slice, const CuspLattice& lattice) {
  if (slice.mode != OrbitMode::horoball) throw DomainError("project_boundary needs a horoball-mode slice");
  BoundarySet out;
  out.n = slice.w.n();
  out.t = slice.t;
  out.s = slice.s;
  out.lattice = lattice;
  for (const OrbitPoint& p : slice.points) {
    std::vector<double> x = p.point.x;
    lattice.reduce(x);
    out.points.push_back(std::move(x));
  }
  return out;
}

std::vector<double> tangent_toward(const BoundaryPoint& xi) {
  const int n = xi.n();
  std::vector<double> v(n, 0.0);
  if (xi.infinite) {
    v[n - 1] = 1.0;
    return v;
  }
  double r = 0;
  for (double x : xi.x) r += x * x;
  r = std::sqrt(r);
  if (r == 0) {
    v[n - 1] = -1.0;
    return v;
  }
  // The ray from i ending at distance r along the unit direction u has polar
  // angle theta = acot(r); its tangent is rotated by 2 theta from "up".
  const double alpha = 2.0 * std::atan2(1.0, r);
  for (int j = 0; j < n - 1; ++j) v[j] = std::sin(alpha) * xi.x[j] / r;
  v[n - 1] = std::cos(alpha);
  return v;
}

std::vector<double> tangent_at_angle(double alpha) { return {std::sin(alpha), std::cos(alpha)}; }

double BoxTest::volume() const {
  double v = 1.0;
  for (std::size_t j = 0; j < lo.size(); ++j) v *= scale * (hi[j] - lo[j]);
  return v;
}

DiskTest make_disk(int n, double sigma, const std::vector<double>& center, double N, double delta) {
  if (!(sigma > 0)) throw DomainError("disk test set needs sigma > 0");
  if (!(N >= 1)) throw DomainError("test sets need N >= 1");
  if (static_cast<int>(center.size()) != n) throw DomainError("disk center must be a unit tangent in R^n");
  DiskTest d;
  double len = 0;
  for (double v : center) len += v * v;
  len = std::sqrt(len);
  if (!(len > 0)) throw DomainError("disk center must be nonzero");
  d.center = center;
  for (double& v : d.center) v /= len;
  d.omega = sigma / std::pow(N, (n - 1) / delta);
  if (d.omega >= 1.0) throw DomainError("disk test set covers the whole sphere");
  d.radius = cap_radius(n, d.omega);
  return d;
}

BoxTest make_box(const std::vector<double>& lo, const std::vector<double>& hi, const std::vector<double>& shift,
                 double N, double delta, const CuspLattice& lattice) {
  if (lo.size() != hi.size() || lo.size() != shift.size() || lo.empty())
    throw DomainError("box test set: inconsistent dimensions");
  if (!(N >= 1)) throw DomainError("test sets need N >= 1");
  for (std::size_t j = 0; j < lo.size(); ++j)
    if (!(hi[j] > lo[j])) throw DomainError("box test set: empty side");
  BoxTest b{lo, hi, shift, std::pow(N, -1.0 / delta), lattice};
  // The scaled box must not reach around the torus in any lattice direction.
  if (lattice.rank() > 0) {
    const std::size_t d = lo.size();
    std::vector<double> cmin(lattice.rank(), INFINITY), cmax(lattice.rank(), -INFINITY);
    for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
      std::vector<double> p(d);
      for (std::size_t j = 0; j < d; ++j) p[j] = b.scale * ((corner >> j) & 1 ? hi[j] : lo[j]);
      const auto c = lattice.coefficients(p);
      for (int k = 0; k < lattice.rank(); ++k) {
        cmin[k] = std::min(cmin[k], c[k]);
        cmax[k] = std::max(cmax[k], c[k]);
      }
    }
    for (int k = 0; k < lattice.rank(); ++k)
      if (cmax[k] - cmin[k] > 1.0 + 1e-12) throw DomainError("box test set wraps the whole torus");
  }
  return b;
}

bool disk_contains(const DiskTest& d, const std::vector<double>& tangent) {
  double dot = 0;
  for (std::size_t j = 0; j < tangent.size(); ++j) dot += tangent[j] * d.center[j];
  return std::acos(std::clamp(dot, -1.0, 1.0)) < d.radius;
}

bool box_contains(const BoxTest& b, const std::vector<double>& p) {
  const std::size_t dim = p.size();
  std::vector<double> q(dim);
  for (std::size_t j = 0; j < dim; ++j) q[j] = p[j] + b.shift[j] - b.scale * b.lo[j];
  auto inside = [&](const std::vector<double>& v) {
    for (std::size_t j = 0; j < dim; ++j)
      if (!(v[j] >= 0 && v[j] < b.scale * (b.hi[j] - b.lo[j]))) return false;
    return true;
  };
  const int r = b.lattice.rank();
  if (r == 0) return inside(q);
  // Try the lattice translates that can bring q near the box.
  std::vector<double> mid(q);
  for (std::size_t j = 0; j < dim; ++j) mid[j] -= 0.5 * b.scale * (b.hi[j] - b.lo[j]);
  const auto c = b.lattice.coefficients(mid);
  std::vector<int> off(r, -1);
  while (true) {
    std::vector<double> v(q);
    for (int k = 0; k < r; ++k) {
      const double m = std::round(c[k]) + off[k];
      for (std::size_t j = 0; j < dim; ++j) v[j] -= m * b.lattice.basis[k][j];
    }
    if (inside(v)) return true;
    int k = 0;
    while (k < r && off[k] == 1) off[k++] = -1;
    if (k == r) return false;
    ++off[k];
  }
}

std::size_t count_hits(const DirectionSet& set, const DiskTest& d) {
  std::size_t c = 0;
  for (const DirectionPoint& p : set.points) c += disk_contains(d, p.tangent);
  return c;
}

std::size_t count_hits(const BoundarySet& set, const BoxTest& b) {
  std::size_t c = 0;
  for (const auto& p : set.points) c += box_contains(b, p);
  return c;
}

void write_direction_csv(std::ostream& os, const DirectionSet& set) {
  os.precision(17);
  os << "# t=" << set.t << " s=" << set.s << " N=" << set.size() << "\n";
  if (set.n == 2) {
    os << "# angle in [0, 2pi); circle coordinate = angle / 2pi (circumference 1)\n";
    os << "angle,circle\n";
    for (const auto& p : set.points) os << p.chart[0] << "," << p.chart[0] / (2 * std::numbers::pi) << "\n";
    return;
  }
  for (int j = 0; j < set.n - 1; ++j) os << (j ? "," : "") << "chart" << j;
  os << "\n";
  for (const auto& p : set.points) {
    for (int j = 0; j < set.n - 1; ++j) os << (j ? "," : "") << p.chart[j];
    os << "\n";
  }
}

void write_boundary_csv(std::ostream& os, const BoundarySet& set) {
  os.precision(17);
  os << "# t=" << set.t << " s=" << set.s << " N=" << set.size() << " lattice_rank=" << set.lattice.rank() << "\n";
  for (int j = 0; j < set.n - 1; ++j) os << (j ? "," : "") << "x" << j;
  os << "\n";
  for (const auto& p : set.points) {
    for (std::size_t j = 0; j < p.size(); ++j) os << (j ? "," : "") << p[j];
    os << "\n";
  }
}

}  // namespace hyperlab
