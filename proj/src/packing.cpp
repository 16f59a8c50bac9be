#include "hyperlab/packing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <ostream>

#include "hyperlab/error.hpp"
#include "hyperlab/point_grid.hpp"

namespace hyperlab {

namespace {

using cplx = std::complex<double>;

// Circle through three points; curvature is positive.
Circle circumcircle(cplx p1, cplx p2, cplx p3) {
  const cplx b = p2 - p1, c = p3 - p1;
  const double d = 2.0 * (b.real() * c.imag() - b.imag() * c.real());
  if (std::abs(d) < 1e-300) throw DomainError("circle image is a line");
  const double bb = std::norm(b), cc = std::norm(c);
  const cplx u((c.imag() * bb - b.imag() * cc) / d, (b.real() * cc - c.real() * bb) / d);
  return Circle{p1 + u, 1.0 / std::abs(u), 0};
}

std::array<double, 3> key_of(const Circle& c) { return {c.center.real(), c.center.imag(), c.radius()}; }

struct Quad {
  std::array<double, 4> k;
  std::array<cplx, 4> z;  // curvature times center
  int last = -1;          // index replaced to reach this quadruple
  int generation = 0;
};

}  // namespace

double descartes_defect(const std::vector<double>& k) {
  if (k.size() != 4) throw DomainError("a Descartes quadruple has four curvatures");
  double sq = 0, sum = 0;
  for (double v : k) {
    sq += v * v;
    sum += v;
  }
  return 2 * sq - sum * sum;
}

double tangency_defect(const Circle& a, const Circle& b) {
  const double d = std::abs(a.center - b.center);
  const bool nested = a.curvature < 0 || b.curvature < 0;
  return std::abs(d - (nested ? std::abs(a.radius() - b.radius()) : a.radius() + b.radius()));
}

std::vector<Circle> generate_apollonian(const std::vector<PlaneCircle>& root, double curvature_bound, double tol,
                                        PackingStats* stats) {
  if (root.size() != 4) throw DomainError("root quadruple needs four circles");
  std::vector<double> k;
  double scale = 0;
  for (const auto& c : root) {
    if (c.curvature == 0) throw DomainError("root circles need nonzero curvature");
    k.push_back(c.curvature);
    scale += std::abs(c.curvature);
  }
  if (std::abs(descartes_defect(k)) > 1e-9 * scale * scale) throw DomainError("root curvatures violate the Descartes relation");
  std::vector<Circle> out;
  for (const auto& c : root) out.push_back(Circle{c.center, c.curvature, 0});
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (tangency_defect(out[i], out[j]) > 1e-9 * std::max(1.0, std::max(out[i].radius(), out[j].radius())))
        throw DomainError("root circles are not mutually tangent");

  PackingStats st;
  PointGrid seen(3, 1e-6, tol);
  for (const Circle& c : out) seen.insert_unique(key_of(c));
  std::deque<Quad> queue;
  Quad q0;
  for (int i = 0; i < 4; ++i) {
    q0.k[i] = root[i].curvature;
    q0.z[i] = root[i].curvature * root[i].center;
  }
  queue.push_back(q0);
  while (!queue.empty()) {
    const Quad q = queue.front();
    queue.pop_front();
    for (int i = 0; i < 4; ++i) {
      if (i == q.last) continue;
      Quad c = q;
      double ks = 0;
      cplx zs = 0;
      for (int j = 0; j < 4; ++j)
        if (j != i) {
          ks += q.k[j];
          zs += q.z[j];
        }
      c.k[i] = 2 * ks - q.k[i];
      c.z[i] = 2.0 * zs - q.z[i];
      if (c.k[i] > curvature_bound) continue;
      c.last = i;
      c.generation = q.generation + 1;
      const Circle child{c.z[i] / c.k[i], c.k[i], c.generation};
      if (!seen.insert_unique(key_of(child)).second) {
        ++st.duplicates;
        continue;
      }
      double sum = 0;
      for (double v : c.k) sum += v;
      st.worst_descartes = std::max(st.worst_descartes, std::abs(descartes_defect({c.k.begin(), c.k.end()})) / (sum * sum));
      for (int j = 0; j < 4; ++j)
        if (j != i) {
          const Circle parent{c.z[j] / c.k[j], c.k[j], 0};
          st.worst_tangency = std::max(st.worst_tangency, tangency_defect(child, parent) / std::max(child.radius(), 1e-300));
        }
      out.push_back(child);
      queue.push_back(c);
    }
  }
  if (stats) *stats = st;
  return out;
}

std::vector<Circle> packing_slice(const std::vector<Circle>& circles, double t, double s) {
  const double lo = std::exp(-t), hi = std::isinf(s) ? INFINITY : std::exp(s - t);
  std::vector<Circle> out;
  for (const Circle& c : circles)
    if (c.radius() >= lo && c.radius() < hi) out.push_back(c);
  return out;
}

BoundarySet packing_centers(const std::vector<Circle>& circles, double t, double s) {
  BoundarySet b;
  b.n = 3;
  b.t = t;
  b.s = s;
  for (const Circle& c : packing_slice(circles, t, s)) b.points.push_back({c.center.real(), c.center.imag()});
  return b;
}

Circle map_circle(const MoebiusMap& g, const Circle& c) {
  if (g.n != 3) throw DomainError("circle images need an n = 3 map");
  const double r = c.radius();
  cplx img[3];
  for (int j = 0; j < 3; ++j) {
    const cplx p = c.center + std::polar(r, 2 * std::numbers::pi * j / 3);
    const BoundaryPoint q = moebius_apply(g, BoundaryPoint::finite({p.real(), p.imag()}));
    if (q.infinite) throw DomainError("circle image passes through infinity");
    img[j] = cplx(q.x[0], q.x[1]);
  }
  return circumcircle(img[0], img[1], img[2]);
}

HPoint apex(const Circle& c) { return HPoint{{c.center.real(), c.center.imag()}, c.radius()}; }

std::vector<Circle> packing_from_orbit(const GroupSpec& spec, const std::vector<PlaneCircle>& root, double t,
                                       double s, double extra_depth, const EnumOptions& opt) {
  if (spec.n != 3) throw DomainError("packing orbit route needs an n = 3 group");
  const double lo = std::exp(-t), hi = std::isinf(s) ? INFINITY : std::exp(s - t);
  // the enclosing circle keeps its sign; every other image lies inside it
  const Circle* outer = nullptr;
  std::vector<Circle> roots;
  for (const auto& c : root) roots.push_back(Circle{c.center, c.curvature, 0});
  for (const Circle& c : roots)
    if (c.curvature < 0) outer = &c;
  PointGrid seen(3, 1e-6, 1e-9);
  std::vector<Circle> out;
  for (const Circle& c : roots) {
    const OrbitSlice slice = enumerate_horoball(spec, apex(c), t + extra_depth, INFINITY, opt);
    for (const OrbitPoint& p : slice.points) {
      Circle img = map_circle(p.map, c);
      img.generation = p.word_length;
      if (outer && std::abs(img.radius() - outer->radius()) < 1e-9 && std::abs(img.center - outer->center) < 1e-9)
        img.curvature = outer->curvature;
      if (!(img.radius() >= lo && img.radius() < hi)) continue;
      if (seen.insert_unique(key_of(img)).second) out.push_back(img);
    }
  }
  return out;
}

FitReport packing_count_fit(const std::vector<Circle>& circles, double t_lo, double t_hi, int samples) {
  std::vector<double> logr;
  for (const Circle& c : circles) logr.push_back(-std::log(c.radius()));
  std::sort(logr.begin(), logr.end());
  if (logr.empty()) throw DomainError("packing count fit needs circles");
  if (t_hi <= 0) {
    t_hi = logr.back();
    t_lo = std::max(logr.front(), t_hi - 1.5 * std::log(10.0));
  }
  if (!(t_lo < t_hi) || samples < 4) throw DomainError("packing count fit needs t_lo < t_hi and at least 4 samples");
  std::vector<std::pair<double, double>> counts;
  for (int j = 0; j < samples; ++j) {
    const double t = t_lo + (t_hi - t_lo) * j / (samples - 1);
    const auto N = std::upper_bound(logr.begin(), logr.end(), t) - logr.begin();
    counts.emplace_back(t, static_cast<double>(N));
  }
  return fit_delta(counts);
}

void write_packing_csv(std::ostream& os, const std::vector<Circle>& circles) {
  os.precision(17);
  os << "cx,cy,curvature,generation\n";
  for (const Circle& c : circles)
    os << c.center.real() << "," << c.center.imag() << "," << c.curvature << "," << c.generation << "\n";
}

}  // namespace hyperlab
