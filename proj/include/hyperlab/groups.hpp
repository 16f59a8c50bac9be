#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hyperlab/hyperbolic.hpp"

namespace hyperlab {

enum class Family { lattice_psl2z, hecke, schottky, apollonian, custom };

std::string family_name(Family f);

struct Generator {
  std::string label;
  MoebiusMap map;
};

/// Lattice of translations fixing infinity, given by a basis of R^{n-1} vectors.
struct CuspLattice {
  std::vector<std::vector<double>> basis;

  int rank() const { return static_cast<int>(basis.size()); }
  /// Subtracts the lattice vector that brings x into the fundamental cell
  /// {sum c_j b_j + (orthogonal part), c_j in [0,1)}. Returns that vector.
  std::vector<double> reduce(std::vector<double>& x) const;
  /// Coefficients of x along the basis (least squares on the span).
  std::vector<double> coefficients(const std::vector<double>& x) const;
};

struct GroupSpec {
  int n = 2;
  std::vector<Generator> generators;
  bool inverses_included = false;
  Family family = Family::custom;
  std::string family_param;
  std::optional<double> claimed_delta;
  std::optional<HPoint> stabilizer_w;
  CuspLattice cusp;

  /// Generators closed under inversion (inverses appended unless they already
  /// appear up to sign). Word letters index into this list.
  std::vector<Generator> word_generators() const;
};

struct CirclePair {
  double center_a = 0.0, radius_a = 0.0;
  double center_b = 0.0, radius_b = 0.0;
};

GroupSpec psl2z();
GroupSpec hecke(int q);
/// Fuchsian Schottky group: generator j maps the outside of disk A_j onto the
/// inside of disk B_j. All disks are centered on the real axis.
GroupSpec schottky(const std::vector<CirclePair>& pairs);
GroupSpec default_schottky();
GroupSpec apollonian();
/// By name: "psl2z", "hecke<q>", "schottky", "apollonian".
GroupSpec builtin_group(const std::string& name);

/// Circle in the plane used by the Apollonian construction.
struct PlaneCircle {
  std::complex<double> center;
  double curvature = 0.0;  // signed, negative for the enclosing circle
};
/// The root quadruple (-1, 2, 2, 3) placed inside the unit circle.
std::vector<PlaneCircle> apollonian_root_circles();

struct LoadedGroup {
  GroupSpec spec;
  std::vector<std::string> warnings;
};

LoadedGroup parse_group_spec(const std::string& text);
LoadedGroup load_group_spec(const std::string& path);
std::string group_spec_to_text(const GroupSpec& spec);

/// Distinct group elements reachable by words of length <= depth.
struct WordElement {
  std::vector<int> word;
  MoebiusMap map;
};
std::vector<WordElement> enumerate_words(const GroupSpec& spec, int depth,
                                         std::size_t budget = 2'000'000);
MoebiusMap replay_word(const std::vector<Generator>& gens, const std::vector<int>& word);

struct StabilizerInfo {
  HPoint w;
  std::vector<std::vector<int>> stabilizer_words;
  int order = 1;
  CuspLattice cusp_lattice;
  int rank() const { return cusp_lattice.rank(); }
};

StabilizerInfo detect_stabilizer(const GroupSpec& spec, const HPoint& w, int word_depth);

}  // namespace hyperlab
