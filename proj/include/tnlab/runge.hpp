#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace tnlab {

/// num / 4^k. Canonical: k = 0 or 4 does not divide num.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long v) : num_(v) {}  // NOLINT(google-explicit-constructor)
  Dyadic(mpz_class num, unsigned k = 0);

  const mpz_class& num() const { return num_; }
  unsigned scale() const { return k_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return k_ == 0; }
  int sign() const { return sgn(num_); }

  Dyadic half() const;
  /// 4^e times this value.
  Dyadic times_pow4(unsigned e) const;
  /// |this| <= bound, exactly.
  bool abs_at_most(const mpz_class& bound) const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic operator-() const { return Dyadic(-num_, k_); }
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.k_ == b.k_ && a.num_ == b.num_; }

  /// Reduced fraction, e.g. "-3/8".
  std::string str() const;

 private:
  void canonicalize();
  mpz_class num_ = 0;
  unsigned k_ = 0;
};

using IntPoly = std::vector<mpz_class>;  // ascending degree, no trailing zeros

/// Exact polynomial over the dyadic rationals, ascending degree, trimmed.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Dyadic> coeffs);
  explicit RationalPoly(const IntPoly& p);

  const std::vector<Dyadic>& coeffs() const { return c_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Dyadic operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Dyadic{}; }

  friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c_ == b.c_; }

  /// Human form such as "x^2 + 3*x + 1" or "-1".
  std::string str() const;

 private:
  void trim();
  std::vector<Dyadic> c_;
};

/// prod (x + j_i). DomainError unless the offsets are strictly increasing,
/// start at 0, and have even count 2u with u >= 2.
IntPoly expand_offset_poly(std::span<const std::uint64_t> offsets);

struct NearSquareDecomposition {
  unsigned u = 0;
  IntPoly P;
  RationalPoly f;  // monic, degree u
  RationalPoly g;  // degree < u
  bool g_is_zero = false;
  bool reconstructs = false;  // P == f^2 + g
};

/// f by the top-down coefficient recurrence, g = P - f^2. DomainError unless
/// P is monic of even degree >= 4.
NearSquareDecomposition compute_f_g(const IntPoly& P);

struct BoundChecks {
  bool a_bound = false;         // |a_{u-k}| <= (k u J)^k, k = 1..u
  bool denominators = false;    // 4^(u-i) a_i integral
  bool b_bound = false;         // |b_i| <= 5 u^(4u-2i) J^(2u-i)
  bool degree_g = false;        // deg g < u
  bool all() const { return a_bound && denominators && b_bound && degree_g; }
};

BoundChecks verify_bounds(const NearSquareDecomposition& d, const mpz_class& J);

struct RungeReport {
  std::vector<std::uint64_t> offsets;
  std::uint64_t J = 0;
  NearSquareDecomposition decomposition;
  BoundChecks bounds;
  mpz_class height_bound;
};

/// expand_offset_poly, compute_f_g and verify_bounds in one step.
RungeReport runge_decompose(std::span<const std::uint64_t> offsets);

/// 5 (2u)^(4u) J^(2u). DomainError for u < 2 or J < 1.
mpz_class height_bound(unsigned u, const mpz_class& J);

struct IntegralPoint {
  std::uint64_t x = 0;
  mpz_class y;
};

/// Every 1 <= x <= x_limit with prod (x + j_i) a square, by exact integer
/// square root of the product. Each hit is checked against height_bound
/// (std::logic_error if ever exceeded).
std::vector<IntegralPoint> search_integral_points(std::span<const std::uint64_t> offsets,
                                                  std::uint64_t x_limit, unsigned workers = 1);

}  // namespace tnlab
