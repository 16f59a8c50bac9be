#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyperlab/groups.hpp"

namespace hyperlab {

struct OrbitPoint {
  HPoint point;             // gamma w, with Re reduced mod the cusp lattice in horoball mode
  std::vector<int> word;    // letters index GroupSpec::word_generators()
  int word_length = 0;
  double displacement = 0;  // d(gamma w, z) in ball mode, -log Im(gamma w) in horoball mode
  MoebiusMap map;           // translation(cusp_shift)^{-1} * replay(word)
  std::vector<double> cusp_shift;  // lattice vector removed by the reduction
  std::vector<double> raw_x;       // Re(gamma w) before reduction
};

enum class OrbitMode { ball, horoball };

struct OrbitSlice {
  OrbitMode mode = OrbitMode::ball;
  HPoint w;
  HPoint z;  // ball center (unused in horoball mode)
  double t = 0, s = 0;
  std::vector<OrbitPoint> points;
  double dedup_tolerance = 1e-9;
  bool complete = true;
  std::size_t elements_visited = 0;
};

struct EnumOptions {
  double slack_multiplier = 1.0;
  std::size_t budget = 10'000'000;
  int threads = 0;
};

/// Largest displacement d(g w, w) over the word generators: the pruning slack.
double generator_slack(const GroupSpec& spec, const HPoint& w);

/// Orbit points with s < d(gamma w, z) < t, one per point.
OrbitSlice enumerate_ball(const GroupSpec& spec, const HPoint& w, const HPoint& z, double t, double s,
                          const EnumOptions& opt = {});
/// Orbit points with e^{-t} <= Im < e^{s-t}, Re reduced into the cusp cell.
OrbitSlice enumerate_horoball(const GroupSpec& spec, const HPoint& w, double t, double s,
                              const EnumOptions& opt = {});
/// All distinct points gamma w for words of length <= depth. Displacement is d(gamma w, w).
std::vector<OrbitPoint> brute_force_words(const GroupSpec& spec, const HPoint& w, int depth,
                                          std::size_t budget = 5'000'000);

/// Checks the word invariant: replaying the word reproduces the stored map.
bool word_consistent(const GroupSpec& spec, const OrbitPoint& p, double tol = 1e-9);

void write_orbit_csv(std::ostream& os, const OrbitSlice& slice);
void write_orbit_binary(std::ostream& os, const OrbitSlice& slice);
/// Reads the coordinates back from the binary cache (header plus flat array).
struct OrbitCache {
  int n = 2;
  OrbitMode mode = OrbitMode::ball;
  double t = 0, s = 0;
  std::vector<HPoint> points;
};
OrbitCache read_orbit_binary(std::istream& is);

}  // namespace hyperlab
