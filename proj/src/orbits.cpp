#include "hyperlab/orbits.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "hyperlab/error.hpp"
#include "hyperlab/parallel.hpp"
#include "hyperlab/point_grid.hpp"

namespace hyperlab {

namespace {

constexpr double kDedupTol = 1e-9;
constexpr double kGridCell = 1e-6;
constexpr std::size_t kChunk = 4096;

HPoint probe_point(const HPoint& w) {
  // Generic companion of w: its stabilizer is trivial, so its image tells
  // group elements apart even when w has a nontrivial stabilizer.
  HPoint p = w;
  for (std::size_t j = 0; j < p.x.size(); ++j) p.x[j] += (0.1234567 + 0.0517 * j) * w.y;
  p.y = w.y * 1.3719;
  return p;
}

std::vector<double> coords_of(const HPoint& p) {
  std::vector<double> v = p.x;
  v.push_back(p.y);
  return v;
}

struct Node {
  MoebiusMap map;
  HPoint image;  // gamma w
  HPoint probe;  // gamma p
  std::vector<int> word;
  std::vector<double> shift;
  std::vector<double> raw_x;
};

struct Walk {
  const GroupSpec& spec;
  const HPoint& w;
  bool horoball;
  const CuspLattice* lattice;
  // Keep expanding while this returns true; emit when `emit` returns true.
  std::function<bool(const HPoint&)> expand;
  std::function<bool(const HPoint&)> emit;
  std::function<double(const HPoint&)> displacement;
};

void run_walk(const Walk& walk, const EnumOptions& opt, OrbitSlice& slice) {
  const std::vector<Generator> gens = walk.spec.word_generators();
  const int n = walk.spec.n;
  const HPoint probe = probe_point(walk.w);
  PointGrid elements(n, kGridCell, kDedupTol);
  PointGrid points(n, kGridCell, kDedupTol);

  auto finish_node = [&](Node& node) {
    node.raw_x = node.image.x;
    if (walk.horoball && walk.lattice->rank() > 0) {
      std::vector<double> x = node.image.x;
      const std::vector<double> m = walk.lattice->reduce(x);
      bool moved = false;
      for (double v : m) moved = moved || v != 0.0;
      if (moved) {
        std::vector<double> minus(m);
        for (double& v : minus) v = -v;
        const MoebiusMap t = translation(minus);
        node.map = t * node.map;
        node.image.x = x;
        for (int j = 0; j < n - 1; ++j) {
          node.probe.x[j] -= m[j];
          node.shift[j] += m[j];
        }
      }
    }
  };

  auto accept = [&](Node& node) {
    ++slice.elements_visited;
    if (walk.emit(node.image) && points.insert_unique(coords_of(node.image)).second) {
      OrbitPoint p;
      p.point = node.image;
      p.word = node.word;
      p.word_length = static_cast<int>(node.word.size());
      p.displacement = walk.displacement(node.image);
      p.map = node.map;
      p.cusp_shift = node.shift;
      p.raw_x = node.raw_x;
      slice.points.push_back(std::move(p));
    }
  };

  Node root{MoebiusMap::identity(n), walk.w, probe, {}, std::vector<double>(n - 1, 0.0), {}};
  finish_node(root);
  elements.insert(coords_of(root.probe));
  accept(root);
  std::vector<Node> frontier;
  if (walk.expand(root.image)) frontier.push_back(std::move(root));

  const std::size_t ng = gens.size();
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (std::size_t start = 0; start < frontier.size(); start += kChunk) {
      const std::size_t stop = std::min(frontier.size(), start + kChunk);
      std::vector<Node> kids((stop - start) * ng);
      std::vector<char> keep(kids.size(), 0);
      parallel_for(kids.size(), opt.threads, [&](std::size_t i) {
        const Node& parent = frontier[start + i / ng];
        const std::size_t k = i % ng;
        Node& kid = kids[i];
        kid.map = parent.map * gens[k].map;
        kid.image = moebius_apply(kid.map, walk.w);
        kid.probe = moebius_apply(kid.map, probe);
        kid.shift = parent.shift;
        finish_node(kid);
        keep[i] = walk.expand(kid.image) ? 1 : 0;
        if (keep[i]) {
          kid.word = parent.word;
          kid.word.push_back(static_cast<int>(k));
        }
      });
      // Sequential insertion keeps the result independent of thread timing.
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (!keep[i]) continue;
        if (!elements.insert_unique(coords_of(kids[i].probe)).second) continue;
        accept(kids[i]);
        next.push_back(std::move(kids[i]));
        if (elements.size() > opt.budget) {
          slice.complete = false;
          return;
        }
      }
    }
    frontier = std::move(next);
  }
}

}  // namespace

double generator_slack(const GroupSpec& spec, const HPoint& w) {
  double b = 0.0;
  for (const Generator& g : spec.word_generators()) b = std::max(b, hyp_distance(moebius_apply(g.map, w), w));
  return b;
}

OrbitSlice enumerate_ball(const GroupSpec& spec, const HPoint& w, const HPoint& z, double t, double s,
                          const EnumOptions& opt) {
  if (!(s >= 0 && s < t)) throw DomainError("enumerate_ball needs 0 <= s < t");
  if (w.n() != spec.n || z.n() != spec.n) throw DomainError("enumerate_ball: dimension mismatch");
  OrbitSlice slice;
  slice.mode = OrbitMode::ball;
  slice.w = w;
  slice.z = z;
  slice.t = t;
  slice.s = s;
  const double reach = t + opt.slack_multiplier * generator_slack(spec, w);
  Walk walk{spec, w, false, &spec.cusp,
            [&](const HPoint& p) { return hyp_distance(p, z) <= reach; },
            [&](const HPoint& p) {
              const double d = hyp_distance(p, z);
              return s < d && d < t;
            },
            [&](const HPoint& p) { return hyp_distance(p, z); }};
  run_walk(walk, opt, slice);
  return slice;
}

OrbitSlice enumerate_horoball(const GroupSpec& spec, const HPoint& w, double t, double s,
                              const EnumOptions& opt) {
  if (!(s > 0)) throw DomainError("enumerate_horoball needs s > 0");
  if (w.n() != spec.n) throw DomainError("enumerate_horoball: dimension mismatch");
  OrbitSlice slice;
  slice.mode = OrbitMode::horoball;
  slice.w = w;
  slice.z = HPoint::base(spec.n);
  slice.t = t;
  slice.s = s;
  const double floor_height = std::exp(-t - opt.slack_multiplier * generator_slack(spec, w));
  const double lo = std::exp(-t);
  const double hi = std::isinf(s) ? INFINITY : std::exp(s - t);
  Walk walk{spec, w, true, &spec.cusp,
            [=](const HPoint& p) { return p.y >= floor_height; },
            [=](const HPoint& p) { return p.y >= lo && p.y < hi; },
            [](const HPoint& p) { return -std::log(p.y); }};
  run_walk(walk, opt, slice);
  return slice;
}

std::vector<OrbitPoint> brute_force_words(const GroupSpec& spec, const HPoint& w, int depth,
                                          std::size_t budget) {
  if (depth < 0) throw DomainError("brute_force_words: negative depth");
  PointGrid points(spec.n, kGridCell, kDedupTol);
  std::vector<OrbitPoint> out;
  for (WordElement& e : enumerate_words(spec, depth, budget)) {
    HPoint p = moebius_apply(e.map, w);
    if (!points.insert_unique(coords_of(p)).second) continue;
    OrbitPoint op;
    op.point = p;
    op.word_length = static_cast<int>(e.word.size());
    op.word = std::move(e.word);
    op.displacement = hyp_distance(p, w);
    op.map = e.map;
    op.cusp_shift.assign(spec.n - 1, 0.0);
    op.raw_x = p.x;
    out.push_back(std::move(op));
  }
  return out;
}

bool word_consistent(const GroupSpec& spec, const OrbitPoint& p, double tol) {
  const MoebiusMap replay = replay_word(spec.word_generators(), p.word);
  MoebiusMap stored = p.map;
  if (!p.cusp_shift.empty()) stored = translation(p.cusp_shift) * stored;
  return replay.distance_to(stored) <= tol * std::max(1.0, norm(replay.a) + norm(replay.b) + norm(replay.c) + norm(replay.d));
}

void write_orbit_csv(std::ostream& os, const OrbitSlice& slice) {
  const int n = slice.w.n();
  os << "mode,t,s,";
  if (n == 2) {
    os << "re,";
  } else {
    for (int j = 0; j < n - 1; ++j) os << "re" << j << ",";
  }
  os << "im,displacement,word_length\n";
  const char* mode = slice.mode == OrbitMode::ball ? "ball" : "horoball";
  os.precision(17);
  for (const OrbitPoint& p : slice.points) {
    os << mode << "," << slice.t << "," << slice.s << ",";
    for (double x : p.point.x) os << x << ",";
    os << p.point.y << "," << p.displacement << "," << p.word_length << "\n";
  }
}

namespace {
constexpr char kMagic[4] = {'H', 'L', 'O', 'B'};
}

void write_orbit_binary(std::ostream& os, const OrbitSlice& slice) {
  const std::int32_t n = slice.w.n();
  const std::int32_t mode = slice.mode == OrbitMode::ball ? 0 : 1;
  const std::uint64_t count = slice.points.size();
  os.write(kMagic, 4);
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(&mode), sizeof mode);
  os.write(reinterpret_cast<const char*>(&slice.t), sizeof slice.t);
  os.write(reinterpret_cast<const char*>(&slice.s), sizeof slice.s);
  os.write(reinterpret_cast<const char*>(&count), sizeof count);
  for (const OrbitPoint& p : slice.points) {
    os.write(reinterpret_cast<const char*>(p.point.x.data()), sizeof(double) * p.point.x.size());
    os.write(reinterpret_cast<const char*>(&p.point.y), sizeof p.point.y);
  }
}

OrbitCache read_orbit_binary(std::istream& is) {
  char magic[4];
  std::int32_t n = 0, mode = 0;
  std::uint64_t count = 0;
  OrbitCache c;
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw DomainError("not an orbit cache");
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  is.read(reinterpret_cast<char*>(&mode), sizeof mode);
  is.read(reinterpret_cast<char*>(&c.t), sizeof c.t);
  is.read(reinterpret_cast<char*>(&c.s), sizeof c.s);
  is.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!is || n < 2 || n > 4) throw DomainError("corrupt orbit cache header");
  c.n = n;
  c.mode = mode == 0 ? OrbitMode::ball : OrbitMode::horoball;
  c.points.resize(count);
  for (HPoint& p : c.points) {
    p.x.resize(n - 1);
    is.read(reinterpret_cast<char*>(p.x.data()), sizeof(double) * p.x.size());
    is.read(reinterpret_cast<char*>(&p.y), sizeof p.y);
  }
  if (!is) throw DomainError("truncated orbit cache");
  return c;
}

}  // namespace hyperlab
