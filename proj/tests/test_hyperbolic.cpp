#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hyperlab/error.hpp"
#include "hyperlab/hyperbolic.hpp"
#include "oracles.hpp"

using namespace hyperlab;
using std::numbers::pi;

namespace {

HPoint pt(double x, double y) { return {{x}, y}; }

double scale_of(const HPoint& p) {
  double s = std::abs(p.y);
  for (double v : p.x) s = std::max(s, std::abs(v));
  return std::max(1.0, s);
}

}  // namespace

TEST_CASE("moebius examples") {
  const HPoint z = pt(0.3, 2.0);
  CHECK(coord_distance(moebius_apply(MoebiusMap::identity(2), z), z) == 0.0);
  const HPoint r = moebius_apply(geodesic_flow(2, 1.7), HPoint::base(2));
  CHECK(r.x[0] == doctest::Approx(0.0));
  CHECK(r.y == doctest::Approx(std::exp(1.7)));
  const HPoint s = moebius_apply(MoebiusMap::real(0, -1, 1, 0), HPoint::base(2));
  CHECK(coord_distance(s, HPoint::base(2)) < 1e-15);
}

TEST_CASE("boundary action and poles") {
  const MoebiusMap S = MoebiusMap::real(0, -1, 1, 0);
  CHECK(moebius_apply(S, BoundaryPoint::finite({0.0})).infinite);
  const BoundaryPoint at_inf = moebius_apply(S, BoundaryPoint::at_infinity(2));
  CHECK_FALSE(at_inf.infinite);
  CHECK(at_inf.x[0] == doctest::Approx(0.0));
  CHECK(moebius_apply(translation({1.0}), BoundaryPoint::at_infinity(2)).infinite);
  CHECK(moebius_apply(S, BoundaryPoint::finite({2.0})).x[0] == doctest::Approx(-0.5));
}

TEST_CASE("distance examples") {
  CHECK(hyp_distance(HPoint::base(2), pt(0, std::exp(2.5))) == doctest::Approx(2.5));
  CHECK(hyp_distance(pt(0.3, 0.7), pt(0.3, 0.7)) == 0.0);
  CHECK(hyp_distance(HPoint::base(2), pt(1, 1)) == doctest::Approx(0.9624236501).epsilon(1e-10));
  CHECK(oracle::geodesic_length(HPoint::base(2), pt(1, 1)) == doctest::Approx(0.9624236501).epsilon(1e-8));
}

TEST_CASE("group action and isometry for n = 2, 3, 4") {
  oracle::Rng rng(11);
  for (int n = 2; n <= 4; ++n) {
    double worst_action = 0, worst_iso = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const MoebiusMap g1 = oracle::random_vahlen(n, rng), g2 = oracle::random_vahlen(n, rng);
      REQUIRE_FALSE(g1.vahlen_violation(1e-9).has_value());
      const HPoint z = oracle::random_point(n, rng), w = oracle::random_point(n, rng);
      const HPoint lhs = moebius_apply(g1 * g2, z), rhs = moebius_apply(g1, moebius_apply(g2, z));
      REQUIRE(lhs.y > 0);
      worst_action = std::max(worst_action, coord_distance(lhs, rhs) / scale_of(lhs));
      const double d0 = hyp_distance(z, w);
      worst_iso = std::max(worst_iso, std::abs(hyp_distance(moebius_apply(g1, z), moebius_apply(g1, w)) - d0));
    }
    CAPTURE(n);
    CHECK(worst_action < 1e-9);
    CHECK(worst_iso < 1e-9);
  }
}

TEST_CASE("inverse and normalization") {
  oracle::Rng rng(12);
  for (int n = 2; n <= 4; ++n) {
    const MoebiusMap g = oracle::random_vahlen(n, rng);
    CHECK((g * g.inverse()).distance_to(MoebiusMap::identity(n)) < 1e-9);
    MoebiusMap h = g;
    h.a *= 3.0, h.b *= 3.0, h.c *= 3.0, h.d *= 3.0;
    CHECK(h.normalized().distance_to(g) < 1e-9);
  }
}

TEST_CASE("distance agrees with geodesic integration") {
  oracle::Rng rng(13);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const HPoint a = oracle::random_point(n, rng), b = oracle::random_point(n, rng);
    worst = std::max(worst, std::abs(hyp_distance(a, b) - oracle::geodesic_length(a, b)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("busemann") {
  const BoundaryPoint inf = BoundaryPoint::at_infinity(2);
  CHECK(busemann(inf, HPoint::base(2), pt(0, std::exp(1.0))) == doctest::Approx(1.0));
  CHECK(busemann(inf, HPoint::base(2), pt(1, 1)) == doctest::Approx(0.0));
  CHECK(busemann(BoundaryPoint::finite({0.4}), pt(0.2, 0.5), pt(0.2, 0.5)) == doctest::Approx(0.0));

  // Limit definition: d(x, xi_T) - d(y, xi_T) along a ray toward xi.
  const BoundaryPoint xi = BoundaryPoint::finite({0.7});
  const HPoint x = pt(-0.3, 1.2), y = pt(1.5, 0.4);
  const HPoint far = pt(0.7, 1e-7);
  CHECK(busemann(xi, x, y) == doctest::Approx(hyp_distance(x, far) - hyp_distance(y, far)).epsilon(1e-6));

  oracle::Rng rng(14);
  for (int n = 2; n <= 4; ++n)
    for (int trial = 0; trial < 200; ++trial) {
      const HPoint a = oracle::random_point(n, rng), b = oracle::random_point(n, rng),
                   c = oracle::random_point(n, rng);
      std::vector<double> v(n - 1);
      for (double& t : v) t = std::uniform_real_distribution<double>(-2, 2)(rng);
      const BoundaryPoint f = BoundaryPoint::finite(v);
      REQUIRE(std::abs(busemann(f, a, c) - busemann(f, a, b) - busemann(f, b, c)) < 1e-9);
    }
}

TEST_CASE("rotations and charts") {
  CHECK(rotation(0).distance_to(MoebiusMap::identity(2)) == 0.0);
  const HPoint r = moebius_apply(rotation(pi / 2), pt(0, std::exp(-1.0)));
  CHECK(r.x[0] == doctest::Approx(0.0));
  CHECK(r.y == doctest::Approx(std::exp(1.0)));
  oracle::Rng rng(15);
  std::uniform_real_distribution<double> u(-0.85, 0.85);
  for (int n = 2; n <= 4; ++n)
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x(n - 1);
      for (double& v : x) v = u(rng) / std::sqrt(n - 1.0);
      std::vector<double> mx(x);
      for (double& v : mx) v = -v;
      const MoebiusMap e = rotation_chart(x);
      REQUIRE((e * rotation_chart(mx)).distance_to(MoebiusMap::identity(n)) < 1e-12);
      REQUIRE(coord_distance(moebius_apply(e, HPoint::base(n)), HPoint::base(n)) < 1e-12);
      REQUIRE_FALSE(e.vahlen_violation(1e-12).has_value());
    }
  CHECK_THROWS_AS(rotation_chart({pi / 2}), DomainError);
}

TEST_CASE("closed form of k(theta)(e^l i)") {
  oracle::Rng rng(16);
  std::uniform_real_distribution<double> ul(0, 5), ut(-pi, pi);
  for (int trial = 0; trial < 500; ++trial) {
    const double l = ul(rng), th = ut(rng);
    const HPoint direct = moebius_apply(rotation(th), pt(0, std::exp(l)));
    const auto [re, im] = rotated_lift(l, th);
    REQUIRE(re == doctest::Approx(direct.x[0]).epsilon(1e-9));
    REQUIRE(im == doctest::Approx(direct.y).epsilon(1e-9));
    const PolarCoords pc = polar_coords(direct.x[0], direct.y);
    const HPoint back = moebius_apply(rotation(pc.theta), pt(0, std::exp(pc.l)));
    REQUIRE(coord_distance(back, direct) < 1e-9 * scale_of(direct));
  }
}

TEST_CASE("direction function") {
  const HPoint up = direction_function(HPoint::base(2), pt(0, std::exp(3.0)));
  CHECK(up.x[0] == doctest::Approx(0.0));
  CHECK(up.y == doctest::Approx(std::exp(1.0)));
  const HPoint down = direction_function(HPoint::base(2), pt(0, std::exp(-3.0)));
  CHECK(down.y == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(direction_function(pt(0.2, 1), pt(0.2, 1)), DomainError);

  oracle::Rng rng(17);
  for (int n = 2; n <= 4; ++n)
    for (int trial = 0; trial < 300; ++trial) {
      const HPoint z = oracle::random_point(n, rng), w = oracle::random_point(n, rng);
      const Direction dir = direction(z, w);
      REQUIRE(hyp_distance(z, dir.point) == doctest::Approx(1.0).epsilon(1e-9));
      // phi lies on the geodesic segment or its extension: distances add up.
      const double dzw = hyp_distance(z, w);
      const double dpw = hyp_distance(dir.point, w);
      REQUIRE(std::abs(dpw - std::abs(dzw - 1.0)) < 1e-7);
      // The ray's endpoint is the forward end of the same geodesic.
      if (!dir.endpoint.infinite) {
        const HPoint nearly{dir.endpoint.x, 1e-9};
        REQUIRE(hyp_distance(z, nearly) - hyp_distance(dir.point, nearly) == doctest::Approx(1.0).epsilon(1e-5));
      }
    }
}

TEST_CASE("direction chart inverts E(x)^{-1} 0") {
  oracle::Rng rng(18);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x = {u(rng), u(rng)};
    std::vector<double> mx = {-x[0], -x[1]};
    const BoundaryPoint xi = moebius_apply(rotation_chart(mx), BoundaryPoint::finite({0.0, 0.0}));
    const auto back = direction_chart(xi);
    REQUIRE(back[0] == doctest::Approx(x[0]).epsilon(1e-12));
    REQUIRE(back[1] == doctest::Approx(x[1]).epsilon(1e-12));
  }
}

TEST_CASE("polar weight") {
  CHECK(polar_weight(MoebiusMap::identity(3)) == doctest::Approx(1.0));
  CHECK(polar_weight(rotation(0.4)) == doctest::Approx(std::cos(0.4)));
  CHECK(polar_weight(rotation(pi / 2)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(polar_weight(geodesic_flow(2, 1.0)), DomainError);
}

TEST_CASE("boundary derivative: finite differences and the Busemann identity") {
  oracle::Rng rng(19);
  for (int n = 2; n <= 3; ++n)
    for (int trial = 0; trial < 200; ++trial) {
      const MoebiusMap g = oracle::random_vahlen(n, rng);
      std::vector<double> v(n - 1);
      for (double& x : v) x = std::uniform_real_distribution<double>(-1, 1)(rng);
      const BoundaryPoint xi = BoundaryPoint::finite(v);
      const BoundaryPoint gx = moebius_apply(g, xi);
      if (gx.infinite) continue;
      const double analytic = boundary_derivative(g, xi);
      // Conformal scale from a centered difference along the first axis.
      const double h = 1e-6;
      std::vector<double> vp(v), vm(v);
      vp[0] += h;
      vm[0] -= h;
      const BoundaryPoint p = moebius_apply(g, BoundaryPoint::finite(vp)),
                          m = moebius_apply(g, BoundaryPoint::finite(vm));
      double diff = 0;
      for (int j = 0; j < n - 1; ++j) diff += (p.x[j] - m.x[j]) * (p.x[j] - m.x[j]);
      const double fd = std::sqrt(diff) / (2 * h);
      REQUIRE(fd == doctest::Approx(analytic).epsilon(1e-6));
      // |g'(xi)| = e^{beta_xi(i, g^{-1} i)} (1 + |g xi|^2) / (1 + |xi|^2).
      double nx = 0, ngx = 0;
      for (int j = 0; j < n - 1; ++j) {
        nx += v[j] * v[j];
        ngx += gx.x[j] * gx.x[j];
      }
      const HPoint base = HPoint::base(n);
      const double predicted =
          std::exp(busemann(xi, base, moebius_apply(g.inverse(), base))) * (1 + ngx) / (1 + nx);
      REQUIRE(predicted == doctest::Approx(analytic).epsilon(1e-9));
    }
}

TEST_CASE("cap fractions") {
  CHECK(cap_fraction(2, pi / 4) == doctest::Approx(0.25));
  CHECK(cap_fraction(3, pi / 2) == doctest::Approx(0.5));
  CHECK(cap_fraction(4, pi / 2) == doctest::Approx(0.5));
  for (int n = 2; n <= 4; ++n) CHECK(cap_radius(n, cap_fraction(n, 0.3)) == doctest::Approx(0.3));
}

// k(theta) for theta uniform on [-pi/2, pi/2) sends 0 to u = tan(theta) up to
// sign, so du = |a|^{-2} dk: weighting dk by polar_weight^{-2} gives
// Lebesgue measure in u.
TEST_CASE("polar change of variables: Lebesgue in u is |a|^{-2} dk") {
  oracle::Rng rng(15);
  std::uniform_real_distribution<double> U(-pi / 2, pi / 2);
  const int samples = 200000, bins = 10;
  std::vector<double> mass(bins, 0.0);
  for (int k = 0; k < samples; ++k) {
    const MoebiusMap g = rotation(U(rng));
    const BoundaryPoint u = moebius_apply(g.inverse(), BoundaryPoint::finite({0.0}));
    if (u.infinite || std::abs(u.x[0]) >= 1) continue;
    const double a = polar_weight(g);
    mass[static_cast<int>((u.x[0] + 1) / 2 * bins)] += pi / samples / (a * a);
  }
  for (double m : mass) CHECK(m == doctest::Approx(2.0 / bins).epsilon(0.03));
}
