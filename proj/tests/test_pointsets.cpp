#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hyperlab/error.hpp"
#include "hyperlab/pointsets.hpp"

using namespace hyperlab;

namespace {

constexpr double kPi = std::numbers::pi;
const HPoint kI = HPoint::base(2);

OrbitSlice ball_slice(const HPoint& z, std::vector<HPoint> pts) {
  OrbitSlice s;
  s.mode = OrbitMode::ball;
  s.z = z;
  s.w = z;
  s.t = 10;
  for (const HPoint& p : pts) s.points.push_back(OrbitPoint{p, {}, 0, hyp_distance(p, z), {}, {}, {}});
  return s;
}

OrbitSlice horo_slice(std::vector<std::vector<double>> xs) {
  OrbitSlice s;
  s.mode = OrbitMode::horoball;
  s.w = HPoint{{0.0}, 2.0};
  for (auto& x : xs) s.points.push_back(OrbitPoint{HPoint{x, 2.0}, {}, 0, 0, {}, {}, {}});
  return s;
}

CuspLattice unit_lattice() { return CuspLattice{{{1.0}}}; }

// Normalized solid angle of the cap of angular radius rho on S^{n-1}, by Simpson.
double cap_fraction_by_quadrature(int n, double rho) {
  auto f = [&](double u) { return std::pow(std::sin(u), n - 2); };
  auto simpson = [&](double b) {
    const int m = 20000;
    const double h = b / m;
    double s = f(0) + f(b);
    for (int k = 1; k < m; ++k) s += (k % 2 ? 4 : 2) * f(k * h);
    return s * h / 3;
  };
  return simpson(rho) / simpson(kPi);
}

}  // namespace

TEST_CASE("vertical geodesic projects to (0, e)") {
  const DirectionSet d = project_directions(ball_slice(kI, {HPoint{{0.0}, std::exp(3.0)}}), kI);
  REQUIRE(d.size() == 1);
  CHECK(d.points[0].point.x[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d.points[0].point.y == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(d.points[0].chart[0] == doctest::Approx(0.0));
}

TEST_CASE("empty slice projects to an empty set") {
  CHECK(project_directions(ball_slice(kI, {}), kI).size() == 0);
  CHECK(project_boundary(horo_slice({}), unit_lattice()).size() == 0);
}

TEST_CASE("projection requires a matching slice") {
  CHECK_THROWS_AS(project_directions(horo_slice({{0.1}}), kI), DomainError);
  CHECK_THROWS_AS(project_directions(ball_slice(kI, {}), HPoint{{0.0}, 2.0}), DomainError);
  CHECK_THROWS_AS(project_boundary(ball_slice(kI, {}), unit_lattice()), DomainError);
}

TEST_CASE("psl2z directions lie on the unit sphere about i") {
  const OrbitSlice s = enumerate_ball(psl2z(), HPoint{{0.0}, 2.0}, kI, 6.0, 0.0);
  const DirectionSet d = project_directions(s, kI);
  REQUIRE(d.size() == s.points.size());
  REQUIRE(d.size() > 100);
  for (const auto& p : d.points) {
    CHECK(hyp_distance(p.point, kI) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::hypot(p.tangent[0], p.tangent[1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.chart[0] >= 0.0);
    CHECK(p.chart[0] < 2 * kPi);
  }
}

TEST_CASE("directions in H^3 carry the sphere chart") {
  const HPoint z = HPoint::base(3);
  const DirectionSet d = project_directions(
      ball_slice(z, {HPoint{{0.5, -0.3}, 0.2}, HPoint{{0.0, 0.0}, 5.0}, HPoint{{2.0, 1.0}, 1.0}}), z);
  REQUIRE(d.size() == 3);
  for (const auto& p : d.points) {
    CHECK(hyp_distance(p.point, z) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.chart.size() == 2);
  }
  CHECK(std::isnan(d.points[1].chart[0]));
  CHECK(!std::isnan(d.points[0].chart[0]));
}

TEST_CASE("boundary projection reduces mod the lattice") {
  const BoundarySet b = project_boundary(horo_slice({{0.3}, {1.3}, {-0.7}}), unit_lattice());
  REQUIRE(b.size() == 3);
  for (const auto& p : b.points) CHECK(p[0] == doctest::Approx(0.3).epsilon(1e-12));
  const BoundarySet free = project_boundary(horo_slice({{1.3}}), CuspLattice{});
  CHECK(free.points[0][0] == doctest::Approx(1.3));
}

TEST_CASE("box count on three points") {
  BoundarySet set;
  set.points = {{0.1}, {0.2}, {0.7}};
  set.lattice = unit_lattice();
  const BoxTest b = make_box({0.0}, {0.5}, {0.0}, 1.0, 1.0, unit_lattice());
  CHECK(count_hits(set, b) == 2);
  set.points.clear();
  CHECK(count_hits(set, b) == 0);
}

TEST_CASE("box is half-open and wraps mod L") {
  const BoxTest b = make_box({0.0}, {0.5}, {0.0}, 1.0, 1.0, unit_lattice());
  CHECK(box_contains(b, {0.0}));
  CHECK(!box_contains(b, {0.5}));
  CHECK(box_contains(b, {1.25}));
  CHECK(box_contains(b, {-0.75}));
  // B = [0, 0.5) - 0.3 mod 1 = [0.7, 1) u [0, 0.2)
  const BoxTest shifted = make_box({0.0}, {0.5}, {0.3}, 1.0, 1.0, unit_lattice());
  CHECK(shifted.shift[0] == 0.3);
  CHECK(box_contains(shifted, {0.8}));
  CHECK(box_contains(shifted, {0.1}));
  CHECK(!box_contains(shifted, {0.5}));
}

TEST_CASE("box scaling identity") {
  const CuspLattice lat2{{{1.0, 0.0}, {0.0, 1.0}}};
  for (double N : {1.0, 10.0, 1234.5}) {
    for (double delta : {1.0, 1.3, 2.0}) {
      const BoxTest b = make_box({0.1, -0.2}, {0.4, 0.3}, {0.0, 0.0}, N, delta, lat2);
      const double expected = std::pow(N, -2.0 / delta) * 0.3 * 0.5;
      CHECK(b.volume() == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("proper test sets only") {
  CHECK_THROWS_AS(make_box({0.0}, {1.5}, {0.0}, 1.0, 1.0, unit_lattice()), DomainError);
  CHECK_THROWS_AS(make_box({0.0}, {0.5}, {0.0}, 0.5, 1.0, unit_lattice()), DomainError);
  CHECK_THROWS_AS(make_box({0.5}, {0.5}, {0.0}, 1.0, 1.0, unit_lattice()), DomainError);
  CHECK_THROWS_AS(make_disk(2, 0.0, {0.0, 1.0}, 10, 1.0), DomainError);
  CHECK_THROWS_AS(make_disk(2, 2.0, {0.0, 1.0}, 1, 1.0), DomainError);
  CHECK_NOTHROW(make_box({0.0}, {1.5}, {0.0}, 4.0, 1.0, unit_lattice()));
}

TEST_CASE("translation equivariance of box counts") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BoundarySet set;
  set.lattice = unit_lattice();
  for (int k = 0; k < 500; ++k) set.points.push_back({u(rng)});
  for (int trial = 0; trial < 20; ++trial) {
    const double c = 3 * u(rng) - 1.5, x = u(rng);
    const BoxTest b = make_box({0.0}, {2.0}, {x}, 10.0, 1.0, unit_lattice());
    const BoxTest moved = make_box({0.0}, {2.0}, {x - c}, 10.0, 1.0, unit_lattice());
    BoundarySet shifted = set;
    for (auto& p : shifted.points) p[0] += c;
    CHECK(count_hits(set, b) == count_hits(shifted, moved));
  }
}

TEST_CASE("disk arc fraction and brute-force membership") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  const double v = ang(rng);
  const DiskTest d = make_disk(2, 1.0, tangent_at_angle(v), 100.0, 1.0);
  CHECK(d.omega == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(2 * d.radius / (2 * kPi) == doctest::Approx(0.01).epsilon(1e-10));
  DirectionSet set;
  std::size_t brute = 0;
  for (int k = 0; k < 20000; ++k) {
    const double a = ang(rng);
    set.points.push_back(DirectionPoint{{}, tangent_at_angle(a), {a}});
    double diff = std::fmod(std::abs(a - v), 2 * kPi);
    diff = std::min(diff, 2 * kPi - diff);
    brute += diff < d.radius;
  }
  CHECK(count_hits(set, d) == brute);
  CHECK(brute > 0);
}

TEST_CASE("disk solid angle matches quadrature") {
  for (int n : {2, 3, 4}) {
    for (double N : {2.0, 50.0, 1e4}) {
      const double sigma = 0.7, delta = n == 2 ? 1.0 : 1.4;
      std::vector<double> c(n, 0.0);
      c[n - 1] = 1.0;
      const DiskTest d = make_disk(n, sigma, c, N, delta);
      const double expected = sigma * std::pow(N, -(n - 1) / delta);
      CHECK(cap_fraction_by_quadrature(n, d.radius) == doctest::Approx(expected).epsilon(1e-6));
    }
  }
}

TEST_CASE("tangent toward a boundary point matches the direction map") {
  for (double xi : {-3.0, -0.4, 0.0, 0.25, 1.0, 7.0}) {
    const auto v = tangent_toward(BoundaryPoint::finite({xi}));
    const double alpha = std::atan2(v[0], v[1]);
    const auto d = direction(kI, HPoint{{xi}, 1e-9});
    CHECK(std::cos(alpha) == doctest::Approx(d.tangent[1]).epsilon(1e-6));
    CHECK(std::sin(alpha) == doctest::Approx(d.tangent[0]).epsilon(1e-6));
  }
  const auto up = tangent_toward(BoundaryPoint::at_infinity(2));
  CHECK(up[1] == 1.0);
}

TEST_CASE("direction csv carries the circle convention") {
  const DirectionSet d = project_directions(ball_slice(kI, {HPoint{{1.0}, 1.0}}), kI);
  std::ostringstream os;
  write_direction_csv(os, d);
  CHECK(os.str().find("circumference 1") != std::string::npos);
  CHECK(os.str().find("angle,circle\n") != std::string::npos);
}
