#include "hyperlab/groups.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "hyperlab/error.hpp"
#include "hyperlab/point_grid.hpp"

namespace hyperlab {

using nlohmann::json;

namespace {

constexpr double kFixTol = 1e-9;

// A point with trivial stabilizer for every group we ship; distinct group
// elements send it to distinct points.
HPoint generic_point(int n) {
  HPoint p = HPoint::base(n);
  for (int j = 0; j < n - 1; ++j) p.x[j] = 0.1234567 + 0.0517 * j;
  p.y = 1.3719;
  return p;
}

std::vector<double> coords_of(const HPoint& p) {
  std::vector<double> v = p.x;
  v.push_back(p.y);
  return v;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::lattice_psl2z: return "lattice_psl2z";
    case Family::hecke: return "hecke";
    case Family::schottky: return "schottky";
    case Family::apollonian: return "apollonian";
    case Family::custom: return "custom";
  }
  return "custom";
}

std::vector<double> CuspLattice::coefficients(const std::vector<double>& x) const {
  const int r = rank();
  // Solve the Gram system; rank is at most 4 so Gaussian elimination is fine.
  std::vector<std::vector<double>> g(r, std::vector<double>(r + 1, 0.0));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j)
      for (std::size_t k = 0; k < x.size(); ++k) g[i][j] += basis[i][k] * basis[j][k];
    for (std::size_t k = 0; k < x.size(); ++k) g[i][r] += basis[i][k] * x[k];
  }
  for (int i = 0; i < r; ++i) {
    int piv = i;
    for (int k = i + 1; k < r; ++k)
      if (std::abs(g[k][i]) > std::abs(g[piv][i])) piv = k;
    std::swap(g[i], g[piv]);
    if (std::abs(g[i][i]) < 1e-300) throw DomainError("cusp lattice basis is degenerate");
    for (int k = 0; k < r; ++k) {
      if (k == i) continue;
      const double f = g[k][i] / g[i][i];
      for (int j = i; j <= r; ++j) g[k][j] -= f * g[i][j];
    }
  }
  std::vector<double> c(r);
  for (int i = 0; i < r; ++i) c[i] = g[i][r] / g[i][i];
  return c;
}

std::vector<double> CuspLattice::reduce(std::vector<double>& x) const {
  std::vector<double> shift(x.size(), 0.0);
  if (basis.empty()) return shift;
  const std::vector<double> c = coefficients(x);
  for (int i = 0; i < rank(); ++i) {
    const double k = std::floor(c[i]);
    for (std::size_t j = 0; j < x.size(); ++j) shift[j] += k * basis[i][j];
  }
  for (std::size_t j = 0; j < x.size(); ++j) x[j] -= shift[j];
  return shift;
}

std::vector<Generator> GroupSpec::word_generators() const {
  if (inverses_included) return generators;
  std::vector<Generator> out;
  for (const Generator& g : generators) {
    out.push_back(g);
    const MoebiusMap inv = g.map.inverse();
    bool present = false;
    for (const Generator& h : generators) present = present || inv.distance_to(h.map) < 1e-12;
    if (!present) out.push_back({g.label + "^-1", inv});
  }
  return out;
}

GroupSpec psl2z() {
  GroupSpec s;
  s.n = 2;
  s.family = Family::lattice_psl2z;
  s.generators = {{"S", MoebiusMap::real(0, -1, 1, 0)}, {"T", MoebiusMap::real(1, 1, 0, 1)}};
  s.claimed_delta = 1.0;
  s.cusp.basis = {{1.0}};
  return s;
}

GroupSpec hecke(int q) {
  if (q < 3) throw DomainError("Hecke group needs q >= 3");
  const double lambda = 2.0 * std::cos(std::numbers::pi / q);
  GroupSpec s;
  s.n = 2;
  s.family = Family::hecke;
  s.family_param = std::to_string(q);
  s.generators = {{"S", MoebiusMap::real(0, -1, 1, 0)},
                  {"T", MoebiusMap::real(1, lambda, 0, 1)}};
  s.claimed_delta = 1.0;
  s.cusp.basis = {{lambda}};
  return s;
}

GroupSpec schottky(const std::vector<CirclePair>& pairs) {
  if (pairs.empty()) throw DomainError("Schottky group needs at least one circle pair");
  struct Disk {
    double c, r;
  };
  std::vector<Disk> disks;
  for (const CirclePair& p : pairs) {
    if (!(p.radius_a > 0) || !(p.radius_b > 0)) throw DomainError("Schottky radii must be positive");
    disks.push_back({p.center_a, p.radius_a});
    disks.push_back({p.center_b, p.radius_b});
  }
  for (std::size_t i = 0; i < disks.size(); ++i)
    for (std::size_t j = i + 1; j < disks.size(); ++j)
      if (std::abs(disks[i].c - disks[j].c) <= disks[i].r + disks[j].r)
        throw DomainError("Schottky disks overlap; discreteness is not guaranteed");
  GroupSpec s;
  s.n = 2;
  s.family = Family::schottky;
  int k = 0;
  for (const CirclePair& p : pairs) {
    // z -> c_b - r_a r_b / (z - c_a): boundary of A onto boundary of B,
    // outside of A into B.
    const double rr = p.radius_a * p.radius_b;
    const MoebiusMap g =
        MoebiusMap::real(p.center_b, -rr - p.center_a * p.center_b, 1.0, -p.center_a).normalized();
    s.generators.push_back({"g" + std::to_string(++k), g});
  }
  return s;
}

GroupSpec default_schottky() { return schottky({{-1.0, 0.1, 1.0, 0.1}, {-3.0, 0.1, 3.0, 0.1}}); }

std::vector<PlaneCircle> apollonian_root_circles() {
  return {{{0.0, 0.0}, -1.0},
          {{-0.5, 0.0}, 2.0},
          {{0.5, 0.0}, 2.0},
          {{0.0, 2.0 / 3.0}, 3.0}};
}

GroupSpec apollonian() {
  const auto root = apollonian_root_circles();
  // Dual circle i passes through the three tangency points of the circles j != i.
  auto tangency = [&](int j, int k) {
    return (root[j].curvature * root[j].center + root[k].curvature * root[k].center) /
           (root[j].curvature + root[k].curvature);
  };
  // Each dual "circle" is stored by the matrix M of its inversion z -> M conj(z).
  // Three collinear tangency points give a line, and inversion becomes reflection.
  std::vector<std::array<std::complex<double>, 4>> duals;
  for (int i = 0; i < 4; ++i) {
    std::vector<int> others;
    for (int j = 0; j < 4; ++j)
      if (j != i) others.push_back(j);
    const auto p1 = tangency(others[0], others[1]);
    const auto p2 = tangency(others[0], others[2]);
    const auto p3 = tangency(others[1], others[2]);
    const std::complex<double> b = p2 - p1, c = p3 - p1;
    const double d = 2.0 * (b.real() * c.imag() - b.imag() * c.real());
    if (std::abs(d) < 1e-12 * std::max(std::norm(b), std::norm(c))) {
      const std::complex<double> rot = b / std::conj(b);  // e^{2 i phi}
      duals.push_back({rot, p1 - rot * std::conj(p1), 0.0, 1.0});
      continue;
    }
    const double bb = std::norm(b), cc = std::norm(c);
    const std::complex<double> u((c.imag() * bb - b.imag() * cc) / d,
                                 (b.real() * cc - c.real() * bb) / d);
    const std::complex<double> center = p1 + u;
    const double r2 = std::norm(u);
    duals.push_back({center, r2 - std::norm(center), 1.0, -std::conj(center)});
  }
  GroupSpec s;
  s.n = 3;
  s.family = Family::apollonian;
  s.inverses_included = true;
  s.claimed_delta = 1.3057;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      // D_i D_j (z) = M_i conj(M_j) z.
      const auto& m = duals[i];
      auto n = duals[j];
      for (auto& v : n) v = std::conj(v);
      std::complex<double> e[4] = {m[0] * n[0] + m[1] * n[2], m[0] * n[1] + m[1] * n[3],
                                   m[2] * n[0] + m[3] * n[2], m[2] * n[1] + m[3] * n[3]};
      const std::complex<double> scale = 1.0 / std::sqrt(e[0] * e[3] - e[1] * e[2]);
      for (auto& v : e) v *= scale;
      s.generators.push_back({"D" + std::to_string(i + 1) + "D" + std::to_string(j + 1),
                              MoebiusMap::complex(e[0], e[1], e[2], e[3])});
    }
  return s;
}

GroupSpec builtin_group(const std::string& name) {
  if (name == "psl2z") return psl2z();
  if (name == "schottky") return default_schottky();
  if (name == "apollonian") return apollonian();
  if (name.rfind("hecke", 0) == 0) {
    const std::string q = name.substr(5);
    if (q.empty()) return hecke(5);
    try {
      return hecke(std::stoi(q));
    } catch (const std::logic_error&) {
      throw DomainError("bad Hecke parameter in '" + name + "'");
    }
  }
  throw DomainError("unknown builtin group '" + name + "'");
}

namespace {

CliffordNumber parse_entry(const json& j, int m, const std::string& where) {
  if (!j.is_array()) throw DomainError(where + ": expected an array of coefficients");
  const std::size_t want = std::size_t{1} << m;
  if (j.size() != want)
    throw DomainError(where + ": expected " + std::to_string(want) + " coefficients, got " +
                      std::to_string(j.size()));
  CliffordNumber c(m);
  for (std::size_t k = 0; k < want; ++k) {
    if (!j[k].is_number()) throw DomainError(where + ": coefficient is not a number");
    c[k] = j[k].get<double>();
  }
  return c;
}

json entry_json(const CliffordNumber& c) {
  json a = json::array();
  for (double v : c.coeffs()) a.push_back(v);
  return a;
}

}  // namespace

LoadedGroup parse_group_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("group spec parse error: ") + e.what());
  }
  if (!doc.is_object()) throw DomainError("group spec must be a JSON object");
  static const char* known[] = {"dimension", "generators", "claimed_delta", "stabilizer_w",
                                "cusp_lattice", "inverses_included"};
  for (const auto& [key, _] : doc.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw DomainError("group spec: unknown field '" + key + "'");
  }
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
    throw DomainError("group spec: integer field 'dimension' is required");
  LoadedGroup out;
  GroupSpec& s = out.spec;
  s.n = doc["dimension"].get<int>();
  if (s.n < 2 || s.n > 4) throw DomainError("group spec: dimension must lie in [2, 4]");
  const int m = entry_algebra(s.n);
  if (!doc.contains("generators") || !doc["generators"].is_array() || doc["generators"].empty())
    throw DomainError("group spec: non-empty array 'generators' is required");
  int idx = 0;
  for (const json& g : doc["generators"]) {
    ++idx;
    if (!g.is_object()) throw DomainError("generator " + std::to_string(idx) + " must be an object");
    for (const auto& [key, _] : g.items())
      if (key != "label" && key != "matrix")
        throw DomainError("generator " + std::to_string(idx) + ": unknown field '" + key + "'");
    const std::string label =
        g.contains("label") ? g["label"].get<std::string>() : "g" + std::to_string(idx);
    const std::string where = "generator '" + label + "'";
    if (!g.contains("matrix") || !g["matrix"].is_array() || g["matrix"].size() != 2 ||
        !g["matrix"][0].is_array() || !g["matrix"][1].is_array() || g["matrix"][0].size() != 2 ||
        g["matrix"][1].size() != 2)
      throw DomainError(where + ": 'matrix' must be a 2x2 array of coefficient arrays");
    const json& mat = g["matrix"];
    MoebiusMap map = MoebiusMap::from_entries(
        s.n, parse_entry(mat[0][0], m, where + " entry a"), parse_entry(mat[0][1], m, where + " entry b"),
        parse_entry(mat[1][0], m, where + " entry c"), parse_entry(mat[1][1], m, where + " entry d"));
    if (auto v = map.vahlen_violation(1e-10)) {
      if (v->find("pseudo-determinant") == std::string::npos) throw DomainError(where + ": " + *v);
    }
    const CliffordNumber det = map.pseudo_det();
    if (!det.is_scalar(1e-10 * std::max(1.0, norm(det))))
      throw DomainError(where + ": pseudo-determinant is not real");
    const double delta = det.scalar_part();
    if (!(delta > 0)) throw DomainError(where + ": pseudo-determinant " + std::to_string(delta) + " is not positive");
    if (std::abs(delta - 1.0) > 1e-12) {
      map = map.normalized();
      std::ostringstream os;
      os << where << ": pseudo-determinant " << delta << " normalized by 1/sqrt(" << delta << ")";
      out.warnings.push_back(os.str());
    }
    if (std::abs(map.pseudo_det().scalar_part() - 1.0) > 1e-9)
      throw DomainError(where + ": pseudo-determinant is not 1 after normalization");
    s.generators.push_back({label, map});
  }
  if (doc.contains("claimed_delta")) s.claimed_delta = doc["claimed_delta"].get<double>();
  if (doc.contains("inverses_included")) s.inverses_included = doc["inverses_included"].get<bool>();
  if (doc.contains("stabilizer_w")) {
    const json& w = doc["stabilizer_w"];
    HPoint p;
    p.x = w.at("x").get<std::vector<double>>();
    p.y = w.at("y").get<double>();
    if (p.n() != s.n || !(p.y > 0)) throw DomainError("group spec: bad stabilizer_w");
    s.stabilizer_w = p;
  }
  if (doc.contains("cusp_lattice")) {
    s.cusp.basis = doc["cusp_lattice"].get<std::vector<std::vector<double>>>();
    for (const auto& v : s.cusp.basis)
      if (static_cast<int>(v.size()) != s.n - 1)
        throw DomainError("group spec: cusp_lattice vectors must have n-1 coordinates");
    if (s.cusp.rank() > s.n - 1) throw DomainError("group spec: cusp lattice rank exceeds n-1");
  }
  return out;
}

LoadedGroup load_group_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open group spec '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_group_spec(ss.str());
}

std::string group_spec_to_text(const GroupSpec& spec) {
  json doc;
  doc["dimension"] = spec.n;
  doc["generators"] = json::array();
  for (const Generator& g : spec.generators)
    doc["generators"].push_back(
        {{"label", g.label},
         {"matrix", {{entry_json(g.map.a), entry_json(g.map.b)}, {entry_json(g.map.c), entry_json(g.map.d)}}}});
  if (spec.inverses_included) doc["inverses_included"] = true;
  if (spec.claimed_delta) doc["claimed_delta"] = *spec.claimed_delta;
  if (spec.stabilizer_w) doc["stabilizer_w"] = {{"x", spec.stabilizer_w->x}, {"y", spec.stabilizer_w->y}};
  if (spec.cusp.rank() > 0) doc["cusp_lattice"] = spec.cusp.basis;
  return doc.dump(2);
}

MoebiusMap replay_word(const std::vector<Generator>& gens, const std::vector<int>& word) {
  if (gens.empty()) throw DomainError("replay_word: empty generator list");
  MoebiusMap g = MoebiusMap::identity(gens.front().map.n);
  for (int letter : word) g = g * gens.at(letter).map;
  return g;
}

std::vector<WordElement> enumerate_words(const GroupSpec& spec, int depth, std::size_t budget) {
  const std::vector<Generator> gens = spec.word_generators();
  const HPoint probe = generic_point(spec.n);
  PointGrid seen(spec.n, 1e-6, 1e-9);
  std::vector<WordElement> out{{{}, MoebiusMap::identity(spec.n)}};
  seen.insert(coords_of(probe));
  std::size_t level_start = 0;
  for (int d = 0; d < depth; ++d) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_start; i < level_end; ++i)
      for (std::size_t k = 0; k < gens.size(); ++k) {
        MoebiusMap g = out[i].map * gens[k].map;
        if (!seen.insert_unique(coords_of(moebius_apply(g, probe))).second) continue;
        std::vector<int> word = out[i].word;
        word.push_back(static_cast<int>(k));
        out.push_back({std::move(word), g});
        if (out.size() > budget) throw DomainError("enumerate_words: budget exceeded");
      }
    level_start = level_end;
  }
  return out;
}

StabilizerInfo detect_stabilizer(const GroupSpec& spec, const HPoint& w, int word_depth) {
  if (word_depth < 1) throw DomainError("detect_stabilizer: word_depth must be >= 1");
  StabilizerInfo info;
  info.w = w;
  info.order = 0;
  std::vector<std::vector<double>> translations;
  for (const WordElement& e : enumerate_words(spec, word_depth)) {
    if (coord_distance(moebius_apply(e.map, w), w) <= kFixTol) {
      info.stabilizer_words.push_back(e.word);
      ++info.order;
    }
    // Parabolic translations fixing infinity: c = 0 and a = d = +-1.
    const MoebiusMap& g = e.map;
    if (norm(g.c) > kFixTol || !g.a.is_scalar(kFixTol) || std::abs(std::abs(g.a[0]) - 1.0) > kFixTol ||
        max_abs_diff(g.a, g.d) > kFixTol)
      continue;
    std::vector<double> v(spec.n - 1);
    for (int j = 0; j < spec.n - 1; ++j) v[j] = g.b.vector_coord(j) * g.a[0];
    double len = 0;
    for (double x : v) len += x * x;
    if (len > kFixTol * kFixTol) translations.push_back(v);
  }
  // Greedy basis from the shortest independent translations.
  std::sort(translations.begin(), translations.end(), [](const auto& p, const auto& q) {
    double a = 0, b = 0;
    for (double x : p) a += x * x;
    for (double x : q) b += x * x;
    return a < b;
  });
  std::vector<std::vector<double>> ortho;
  for (const auto& v : translations) {
    std::vector<double> r = v;
    for (const auto& o : ortho) {
      double dot = 0, oo = 0;
      for (std::size_t j = 0; j < r.size(); ++j) {
        dot += r[j] * o[j];
        oo += o[j] * o[j];
      }
      for (std::size_t j = 0; j < r.size(); ++j) r[j] -= dot / oo * o[j];
    }
    double rl = 0, vl = 0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      rl += r[j] * r[j];
      vl += v[j] * v[j];
    }
    if (rl > 1e-12 * vl) {
      ortho.push_back(r);
      // Prefer the representative with a positive leading coordinate.
      std::vector<double> b = v;
      for (double x : b) {
        if (std::abs(x) > kFixTol) {
          if (x < 0)
            for (double& y : b) y = -y;
          break;
        }
      }
      info.cusp_lattice.basis.push_back(b);
    }
  }
  return info;
}

}  // namespace hyperlab
