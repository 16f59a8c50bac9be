#include "hyperlab/clifford.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "hyperlab/error.hpp"

namespace hyperlab {

namespace {

void check_dim(int m) {
  if (m < 0 || m > kMaxCliffordDim)
    throw DomainError("Clifford dimension " + std::to_string(m) + " outside [0, " +
                      std::to_string(kMaxCliffordDim) + "]");
}

void check_same(const CliffordNumber& a, const CliffordNumber& b) {
  if (a.dim() != b.dim())
    throw DomainError("Clifford dimension mismatch: C_" + std::to_string(a.dim()) + " vs C_" +
                      std::to_string(b.dim()));
}

}  // namespace

CliffordNumber::CliffordNumber(int m) : m_(m) { check_dim(m); }

CliffordNumber CliffordNumber::scalar(int m, double value) {
  CliffordNumber r(m);
  r.c_[0] = value;
  return r;
}

CliffordNumber CliffordNumber::generator(int m, int j) {
  if (j < 1 || j > m) throw DomainError("generator index out of range");
  CliffordNumber r(m);
  r.c_[std::size_t{1} << (j - 1)] = 1.0;
  return r;
}

CliffordNumber CliffordNumber::vector(int m, std::span<const double> coords) {
  if (coords.size() > static_cast<std::size_t>(m) + 1)
    throw DomainError("too many vector coordinates for C_" + std::to_string(m));
  CliffordNumber r(m);
  for (std::size_t j = 0; j < coords.size(); ++j)
    r.c_[j == 0 ? 0 : (std::size_t{1} << (j - 1))] = coords[j];
  return r;
}

CliffordNumber CliffordNumber::vector(int m, std::initializer_list<double> coords) {
  return vector(m, std::span<const double>(coords.begin(), coords.size()));
}

double CliffordNumber::vector_coord(int j) const {
  if (j < 0 || j > m_) throw DomainError("vector coordinate out of range");
  return j == 0 ? c_[0] : c_[std::size_t{1} << (j - 1)];
}

bool CliffordNumber::is_zero(double tol) const {
  for (std::size_t k = 0; k < size(); ++k)
    if (std::abs(c_[k]) > tol) return false;
  return true;
}

bool CliffordNumber::is_vector(double tol) const {
  for (std::size_t k = 0; k < size(); ++k)
    if (std::popcount(k) > 1 && std::abs(c_[k]) > tol) return false;
  return true;
}

bool CliffordNumber::is_scalar(double tol) const {
  for (std::size_t k = 1; k < size(); ++k)
    if (std::abs(c_[k]) > tol) return false;
  return true;
}

CliffordNumber& CliffordNumber::operator+=(const CliffordNumber& o) {
  check_same(*this, o);
  for (std::size_t k = 0; k < size(); ++k) c_[k] += o.c_[k];
  return *this;
}

CliffordNumber& CliffordNumber::operator-=(const CliffordNumber& o) {
  check_same(*this, o);
  for (std::size_t k = 0; k < size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

CliffordNumber& CliffordNumber::operator*=(double s) {
  for (std::size_t k = 0; k < size(); ++k) c_[k] *= s;
  return *this;
}

std::string CliffordNumber::to_string() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (std::size_t k = 0; k < size(); ++k) {
    if (c_[k] == 0.0) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[k];
    for (int j = 0; j < m_; ++j)
      if (k & (std::size_t{1} << j)) os << "*i" << (j + 1);
  }
  if (first) os << "0";
  return os.str();
}

CliffordNumber operator+(CliffordNumber a, const CliffordNumber& b) { return a += b; }
CliffordNumber operator-(CliffordNumber a, const CliffordNumber& b) { return a -= b; }
CliffordNumber operator-(CliffordNumber a) { return a *= -1.0; }
CliffordNumber operator*(CliffordNumber a, double s) { return a *= s; }
CliffordNumber operator*(double s, CliffordNumber a) { return a *= s; }
CliffordNumber operator*(const CliffordNumber& a, const CliffordNumber& b) {
  return clifford_mul(a, b);
}

int blade_sign(unsigned a, unsigned b) {
  // Swaps needed to sort the concatenated generator list, then one -1 per
  // generator that meets itself.
  int swaps = 0;
  for (unsigned s = a >> 1; s != 0; s >>= 1) swaps += std::popcount(s & b);
  swaps += std::popcount(a & b);
  return (swaps & 1) ? -1 : 1;
}

CliffordNumber clifford_mul(const CliffordNumber& a, const CliffordNumber& b) {
  check_same(a, b);
  CliffordNumber r(a.dim());
  const unsigned n = static_cast<unsigned>(a.size());
  for (unsigned i = 0; i < n; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (unsigned j = 0; j < n; ++j) {
      const double bj = b[j];
      if (bj == 0.0) continue;
      r[i ^ j] += blade_sign(i, j) * ai * bj;
    }
  }
  return r;
}

CliffordNumber involute(const CliffordNumber& a, Involution kind) {
  CliffordNumber r = a;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const int g = std::popcount(k);
    int e = 0;
    switch (kind) {
      case Involution::prime: e = g; break;
      case Involution::star: e = g * (g - 1) / 2; break;
      case Involution::bar: e = g * (g + 1) / 2; break;
    }
    if (e & 1) r[k] = -r[k];
  }
  return r;
}

double norm_sq(const CliffordNumber& a) {
  double s = 0.0;
  for (double v : a.coeffs()) s += v * v;
  return s;
}

double norm(const CliffordNumber& a) { return std::sqrt(norm_sq(a)); }

CliffordNumber vector_inverse(const CliffordNumber& x) {
  if (!x.is_vector(0.0)) throw DomainError("vector_inverse: argument is not a Clifford vector");
  const double n2 = norm_sq(x);
  if (n2 == 0.0) throw DomainError("vector_inverse: zero vector");
  return bar(x) * (1.0 / n2);
}

CliffordNumber clifford_group_inverse(const CliffordNumber& x) {
  const double n2 = norm_sq(x);
  if (n2 == 0.0) throw DomainError("inverse of zero Clifford number");
  return bar(x) * (1.0 / n2);
}

CliffordNumber embed(const CliffordNumber& a, int m) {
  if (m < a.dim()) throw DomainError("embed: target algebra is smaller");
  CliffordNumber r(m);
  for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k];
  return r;
}

double max_abs_diff(const CliffordNumber& a, const CliffordNumber& b) {
  check_same(a, b);
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

}  // namespace hyperlab
