#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "hyperlab/error.hpp"
#include "hyperlab/groups.hpp"

using namespace hyperlab;

TEST_CASE("builtin families") {
  const GroupSpec g = psl2z();
  CHECK(g.generators.size() == 2);
  CHECK(g.n == 2);
  CHECK(*g.claimed_delta == 1.0);
  CHECK(g.word_generators().size() == 3);  // S is an involution in PSL

  const GroupSpec s = default_schottky();
  CHECK(s.generators.size() == 2);
  CHECK(s.word_generators().size() == 4);

  const GroupSpec a = apollonian();
  CHECK(a.n == 3);
  CHECK(*a.claimed_delta >= 1.25);
  CHECK(*a.claimed_delta <= 1.36);
  CHECK(a.generators.size() == 12);

  for (const GroupSpec& spec : {psl2z(), hecke(5), default_schottky(), apollonian()})
    for (const Generator& gen : spec.word_generators()) {
      CAPTURE(gen.label);
      CHECK_FALSE(gen.map.vahlen_violation(1e-10).has_value());
      CHECK(std::abs(gen.map.pseudo_det()[0] - 1.0) < 1e-10);
      CHECK(moebius_apply(gen.map, HPoint::base(spec.n)).y > 0);
    }
  CHECK_THROWS_AS(schottky({{-1.0, 0.6, 0.0, 0.6}}), DomainError);
}

namespace {

bool in_disk(double x, double c, double r) { return std::abs(x - c) <= r + 1e-12; }

}  // namespace

TEST_CASE("schottky ping-pong") {
  // Generator j maps everything outside A_j into B_j; its inverse maps
  // everything outside B_j into A_j. Check with boundary samples.
  const std::vector<CirclePair> pairs = {{-1.0, 0.1, 1.0, 0.1}, {-3.0, 0.1, 3.0, 0.1}};
  const GroupSpec s = schottky(pairs);
  const auto gens = s.word_generators();
  struct Disk {
    double c, r;
  };
  // word_generators order: g1, g1^-1, g2, g2^-1. Image disk and excluded disk.
  const std::vector<std::pair<Disk, Disk>> target = {{{1, 0.1}, {-1, 0.1}}, {{-1, 0.1}, {1, 0.1}},
                                                     {{3, 0.1}, {-3, 0.1}}, {{-3, 0.1}, {3, 0.1}}};
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (double x = -10; x <= 10; x += 0.01) {
      if (in_disk(x, target[k].second.c, target[k].second.r)) continue;
      const BoundaryPoint img = moebius_apply(gens[k].map, BoundaryPoint::finite({x}));
      REQUIRE_FALSE(img.infinite);
      REQUIRE(in_disk(img.x[0], target[k].first.c, target[k].first.r));
    }
  // Reduced words of length <= 6 land in the disk of their first letter.
  const auto words = enumerate_words(s, 6);
  for (const WordElement& e : words) {
    if (e.word.empty()) continue;
    const Disk d = target[e.word.front()].first;
    for (double x : {-7.3, 0.0, 2.2, 8.1}) {
      // Skip samples inside the disk excluded by the last letter.
      if (in_disk(x, target[e.word.back()].second.c, target[e.word.back()].second.r)) continue;
      const BoundaryPoint img = moebius_apply(e.map, BoundaryPoint::finite({x}));
      REQUIRE(in_disk(img.x[0], d.c, d.r));
    }
  }
}

TEST_CASE("group spec file round trip") {
  const std::string text = group_spec_to_text(psl2z());
  const LoadedGroup back = parse_group_spec(text);
  CHECK(back.warnings.empty());
  REQUIRE(back.spec.generators.size() == 2);
  for (int k = 0; k < 2; ++k) CHECK(back.spec.generators[k].map.distance_to(psl2z().generators[k].map) == 0.0);
  CHECK(back.spec.cusp.basis == psl2z().cusp.basis);

  const char* path = "group_spec_roundtrip.json";
  {
    std::ofstream(path) << group_spec_to_text(apollonian());
  }
  const LoadedGroup ap = load_group_spec(path);
  std::remove(path);
  CHECK(ap.spec.generators.size() == 12);
  CHECK(ap.spec.inverses_included);
}

TEST_CASE("group spec normalization and validation") {
  const LoadedGroup scaled = parse_group_spec(
      R"({"dimension": 2, "generators": [{"label": "D", "matrix": [[[2], [0]], [[0], [1]]]}]})");
  REQUIRE(scaled.warnings.size() == 1);
  CHECK(scaled.warnings[0].find("normalized") != std::string::npos);
  CHECK(scaled.spec.generators[0].map.a[0] == doctest::Approx(std::sqrt(2.0)));

  // n = 3 with c = i1 and a = 1 + i1 is fine; force c*a to be a non-vector in n = 4.
  const std::string bad = R"({"dimension": 4, "generators": [{"label": "X", "matrix": [
      [[1, 0, 0, 1], [0, 0, 0, 0]], [[0, 1, 1, 0], [1, 0, 0, 0]]]}]})";
  try {
    parse_group_spec(bad);
    FAIL("expected a Vahlen violation");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("generator 'X'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_group_spec(R"({"dimension": 2, "generators": [], "colour": 1})"), DomainError);
  CHECK_THROWS_AS(parse_group_spec(R"({"dimension": 2, "generators": [{"matrix": [[[0], [1]], [[1], [0]]]}]})"),
                  DomainError);
  CHECK_THROWS_AS(parse_group_spec("{not json"), DomainError);
}

TEST_CASE("stabilizer detection") {
  const StabilizerInfo at_i = detect_stabilizer(psl2z(), HPoint::base(2), 4);
  CHECK(at_i.order == 2);
  const StabilizerInfo at_2i = detect_stabilizer(psl2z(), {{0.0}, 2.0}, 6);
  CHECK(at_2i.order == 1);
  REQUIRE(at_2i.rank() == 1);
  CHECK(at_2i.cusp_lattice.basis[0][0] == doctest::Approx(1.0));
  const StabilizerInfo again = detect_stabilizer(psl2z(), {{0.0}, 2.0}, 6);
  CHECK(again.stabilizer_words == at_2i.stabilizer_words);
  CHECK(detect_stabilizer(default_schottky(), HPoint::base(2), 4).rank() == 0);
  const StabilizerInfo rho = detect_stabilizer(psl2z(), {{0.5}, std::sqrt(3.0) / 2}, 5);
  CHECK(rho.order == 3);
}

TEST_CASE("cusp lattice reduction") {
  CuspLattice l{{{1.0}}};
  std::vector<double> x = {3.25};
  const auto shift = l.reduce(x);
  CHECK(x[0] == doctest::Approx(0.25));
  CHECK(shift[0] == doctest::Approx(3.0));
  std::vector<double> y = {-0.75};
  l.reduce(y);
  CHECK(y[0] == doctest::Approx(0.25));
  CuspLattice rank0;
  std::vector<double> z = {5.0};
  rank0.reduce(z);
  CHECK(z[0] == 5.0);
}
