#include <doctest.h>

#include <cmath>

#include "hyperlab/clifford.hpp"
#include "hyperlab/error.hpp"
#include "oracles.hpp"

using namespace hyperlab;

namespace {
CliffordNumber gen(int m, int j) { return CliffordNumber::generator(m, j); }
CliffordNumber one(int m) { return CliffordNumber::scalar(m, 1.0); }
}  // namespace

TEST_CASE("generator products") {
  CHECK(max_abs_diff(gen(2, 1) * gen(2, 1), CliffordNumber::scalar(2, -1.0)) == 0.0);
  const CliffordNumber i12 = gen(2, 1) * gen(2, 2);
  CHECK(i12[3] == 1.0);
  CHECK(max_abs_diff(gen(2, 2) * gen(2, 1), -i12) == 0.0);
  CHECK(max_abs_diff((one(1) + gen(1, 1)) * (one(1) - gen(1, 1)), CliffordNumber::scalar(1, 2.0)) == 0.0);
  CHECK_THROWS_AS(clifford_mul(one(1), one(2)), DomainError);
}

TEST_CASE("involutions on blades") {
  const CliffordNumber i12 = gen(2, 1) * gen(2, 2);
  CHECK(max_abs_diff(prime(i12), i12) == 0.0);
  CHECK(max_abs_diff(star(i12), -i12) == 0.0);
  const CliffordNumber x = CliffordNumber::vector(3, {0.5, 1.0, -2.0, 3.0});
  CHECK(max_abs_diff(bar(x), CliffordNumber::vector(3, {0.5, -1.0, 2.0, -3.0})) == 0.0);
}

TEST_CASE("norms") {
  CHECK(norm_sq(gen(2, 1) + gen(2, 2)) == doctest::Approx(2.0));
  CHECK(norm_sq(CliffordNumber(3)) == 0.0);
  CHECK(norm_sq((one(2) + gen(2, 1)) * (one(2) + gen(2, 2))) == doctest::Approx(4.0));
}

TEST_CASE("vector inverse") {
  CHECK(max_abs_diff(vector_inverse(gen(1, 1)), -gen(1, 1)) < 1e-15);
  CHECK(vector_inverse(CliffordNumber::scalar(0, 2.0))[0] == doctest::Approx(0.5));
  const CliffordNumber x = one(1) + gen(1, 1);
  const CliffordNumber xi = vector_inverse(x);
  CHECK(max_abs_diff(xi, (one(1) - gen(1, 1)) * 0.5) < 1e-15);
  CHECK(max_abs_diff(x * xi, one(1)) < 1e-15);
  CHECK_THROWS_AS(vector_inverse(CliffordNumber(2)), DomainError);
}

TEST_CASE("associativity on random triples in C_3") {
  oracle::Rng rng(1);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = oracle::random_clifford(3, rng), b = oracle::random_clifford(3, rng),
               c = oracle::random_clifford(3, rng);
    worst = std::max(worst, max_abs_diff((a * b) * c, a * (b * c)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("involution laws") {
  oracle::Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = oracle::random_clifford(3, rng), b = oracle::random_clifford(3, rng);
    REQUIRE(max_abs_diff(prime(prime(a)), a) == 0.0);
    REQUIRE(max_abs_diff(star(star(a)), a) == 0.0);
    REQUIRE(max_abs_diff(star(a * b), star(b) * star(a)) < 1e-14);
    REQUIRE(max_abs_diff(prime(a * b), prime(a) * prime(b)) < 1e-14);
  }
}

TEST_CASE("norm multiplicative on the Clifford group") {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = oracle::random_vector(3, rng) * oracle::random_vector(3, rng);
    const auto b = oracle::random_vector(3, rng);
    const double lhs = norm_sq(a * b), rhs = norm_sq(a) * norm_sq(b);
    REQUIRE(std::abs(lhs - rhs) <= 1e-10 * rhs);
  }
}

TEST_CASE("x bar(x) is the squared norm") {
  oracle::Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = oracle::random_vector(3, rng);
    const auto p = x * bar(x);
    REQUIRE(p.is_scalar(1e-14));
    REQUIRE(p[0] == doctest::Approx(norm_sq(x)).epsilon(1e-13));
  }
}

TEST_CASE("clifford group inverse and embedding") {
  oracle::Rng rng(5);
  const auto g = oracle::random_vector(2, rng) * oracle::random_vector(2, rng);
  CHECK(max_abs_diff(g * clifford_group_inverse(g), one(2)) < 1e-14);
  const auto e = embed(gen(1, 1), 3);
  CHECK(e.dim() == 3);
  CHECK(max_abs_diff(e, gen(3, 1)) == 0.0);
}
