#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

namespace hyperlab {

// Largest algebra we need: C_3, where the action on H^4 is computed.
inline constexpr int kMaxCliffordDim = 3;

enum class Involution { prime, star, bar };

/// Element of the negative-definite Clifford algebra C_m.
/// Coefficient k belongs to the blade whose generators are the set bits of k.
class CliffordNumber {
 public:
  CliffordNumber() = default;
  explicit CliffordNumber(int m);

  static CliffordNumber scalar(int m, double value);
  static CliffordNumber generator(int m, int j);  // i_j, 1-based
  /// x_0 + x_1 i_1 + ... from a coordinate list of length <= m+1.
  static CliffordNumber vector(int m, std::span<const double> coords);
  static CliffordNumber vector(int m, std::initializer_list<double> coords);

  int dim() const { return m_; }
  std::size_t size() const { return std::size_t{1} << m_; }

  double& operator[](std::size_t blade) { return c_[blade]; }
  double operator[](std::size_t blade) const { return c_[blade]; }
  std::span<const double> coeffs() const { return {c_.data(), size()}; }

  double scalar_part() const { return c_[0]; }
  /// Coordinate j of a vector: j = 0 is the scalar, j >= 1 is i_j.
  double vector_coord(int j) const;

  bool is_zero(double tol = 0.0) const;
  /// Nonzero coefficients only on blades of grade <= 1.
  bool is_vector(double tol) const;
  bool is_scalar(double tol) const;

  CliffordNumber& operator+=(const CliffordNumber& o);
  CliffordNumber& operator-=(const CliffordNumber& o);
  CliffordNumber& operator*=(double s);

  std::string to_string() const;

 private:
  int m_ = 0;
  std::array<double, std::size_t{1} << kMaxCliffordDim> c_{};
};

CliffordNumber operator+(CliffordNumber a, const CliffordNumber& b);
CliffordNumber operator-(CliffordNumber a, const CliffordNumber& b);
CliffordNumber operator-(CliffordNumber a);
CliffordNumber operator*(CliffordNumber a, double s);
CliffordNumber operator*(double s, CliffordNumber a);
CliffordNumber operator*(const CliffordNumber& a, const CliffordNumber& b);

/// Sign picked up when the blades with bitmasks a and b are multiplied.
int blade_sign(unsigned a, unsigned b);

CliffordNumber clifford_mul(const CliffordNumber& a, const CliffordNumber& b);
CliffordNumber involute(const CliffordNumber& a, Involution kind);
inline CliffordNumber prime(const CliffordNumber& a) { return involute(a, Involution::prime); }
inline CliffordNumber star(const CliffordNumber& a) { return involute(a, Involution::star); }
inline CliffordNumber bar(const CliffordNumber& a) { return involute(a, Involution::bar); }

double norm_sq(const CliffordNumber& a);
double norm(const CliffordNumber& a);

/// Inverse of a nonzero Clifford vector.
CliffordNumber vector_inverse(const CliffordNumber& x);
/// Inverse of any element of the Clifford group (products of nonzero vectors).
CliffordNumber clifford_group_inverse(const CliffordNumber& x);

/// Same coefficients viewed in the larger algebra C_m.
CliffordNumber embed(const CliffordNumber& a, int m);

double max_abs_diff(const CliffordNumber& a, const CliffordNumber& b);

}  // namespace hyperlab
