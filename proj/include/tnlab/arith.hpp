#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace tnlab {

/// Default ceiling on SpfTable entries (2^31).
inline constexpr std::uint64_t kDefaultSieveCap = std::uint64_t{1} << 31;

std::uint64_t isqrt(std::uint64_t n);
bool is_square(std::uint64_t n);

/// All primes <= limit, ascending (plain Eratosthenes).
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

/// Smallest-prime-factor table for 2..limit.
///
/// Immutable after construction; every query is a pure read, so a single
/// table can be shared by any number of worker threads.
class SpfTable {
 public:
  /// Throws RangeError unless 2 <= limit <= cap.
  explicit SpfTable(std::uint64_t limit, std::uint64_t cap = kDefaultSieveCap);

  std::uint64_t limit() const { return limit_; }
  /// Requires 2 <= m <= limit.
  std::uint32_t spf(std::uint64_t m) const { return spf_[m]; }
  bool is_prime(std::uint64_t m) const { return m >= 2 && m <= limit_ && spf_[m] == m; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }
  /// pi(y); y may exceed the limit only if y <= limit (RangeError otherwise).
  std::uint64_t prime_pi(std::uint64_t y) const;
  /// True when every integer up to m can be factored (directly or by trial
  /// division over the table's primes).
  bool can_factor(std::uint64_t m) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

SpfTable build_spf_table(std::uint64_t limit, std::uint64_t cap = kDefaultSieveCap);

struct PrimePower {
  std::uint64_t prime;
  std::uint32_t exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct FactorizationRecord {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;  // primes strictly increasing

  /// P+(n), with P+(1) = 1.
  std::uint64_t largest_prime() const { return factors.empty() ? 1 : factors.back().prime; }
  std::size_t omega() const { return factors.size(); }
  /// Product of the primes dividing n to odd multiplicity.
  std::uint64_t squarefree_kernel() const;
  /// Recomposes the product; used by round-trip checks.
  std::uint64_t value() const;
};

/// Factorization through the table. Throws DomainError for n = 0 and
/// RangeError for n > table.limit().
FactorizationRecord factorize(std::uint64_t n, const SpfTable& table);

/// Factorization for n up to table.limit()^2: table lookup when possible,
/// otherwise trial division by the table's primes with the cofactor taken
/// as prime.
FactorizationRecord factorize_any(std::uint64_t n, const SpfTable& table);

/// Trial division by primes <= sqrt(n); no table.
FactorizationRecord factorize_trial(std::uint64_t n);

/// y-smooth integers in (lo, hi], ascending. Requires lo < hi <= table.limit().
std::vector<std::uint64_t> smooth_in_interval(std::uint64_t lo, std::uint64_t hi, std::uint64_t y,
                                              const SpfTable& table);

/// Psi(x, y), counting n = 1.
std::uint64_t psi_count(std::uint64_t x, std::uint64_t y, const SpfTable& table);

/// Segmented variants for ranges beyond any table: sieve (lo, hi] dividing
/// out every prime <= y; survivors reduced to 1 are y-smooth.
std::vector<std::uint64_t> smooth_in_interval_segmented(std::uint64_t lo, std::uint64_t hi,
                                                        std::uint64_t y);
std::uint64_t psi_count_segmented(std::uint64_t x, std::uint64_t y);

/// pi(y) without a table.
std::uint64_t prime_pi(std::uint64_t y);

/// Odd-exponent primes of every integer in [lo, lo + count), computed by a
/// block sieve over primes <= sqrt(lo + count - 1). Entry i holds the
/// ascending support for lo + i. Requires lo >= 1.
std::vector<std::vector<std::uint64_t>> odd_prime_supports(std::uint64_t lo, std::uint64_t count,
                                                            const SpfTable& table);

}  // namespace tnlab
