#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "tnlab/arith.hpp"

namespace tnlab {

/// Natural logarithms throughout.
struct HeightBoundReport {
  std::string label;
  /// What `value` bounds: "log log x" for the height bounds, "t_n" for the
  /// lower bound.
  std::string quantity;
  long double value = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // in insertion order
  std::string constant_policy;
};

struct PellPoint {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  friend bool operator==(const PellPoint&, const PellPoint&) = default;
  friend auto operator<=>(const PellPoint&, const PellPoint&) = default;
};

struct PellReport {
  std::uint64_t J = 0;
  std::vector<PellPoint> solutions;  // ascending x
  std::uint64_t brute_limit = 0;     // brute force covered 1 <= x <= brute_limit
  bool brute_agrees = false;
};

/// All x >= 1 with x(x + J) a square, built from d | J and
/// (b - a)(b + a) = J / d, so x = d a^2 and y = d a b. Brute force over
/// x <= min(J^2, search_limit) is run alongside and compared. J <= 2^31.
PellReport pell_solutions(std::uint64_t J, std::uint64_t search_limit);

/// ln of (4n)^(212 n^4) H^(50 n^4). DomainError for degree < 3 or H < 1.
HeightBoundReport beg_log_bound(int degree, const mpz_class& H);

/// Exponent constant * s^5 * ln J in log x <= exp(...). With no constant the
/// bound above is expanded at degree s + 2 and H = J^(s + 1).
/// DomainError unless 1 <= s < J and constant >= 0.
HeightBoundReport small_s_log_bound(std::uint64_t s, std::uint64_t J,
                                    std::optional<long double> constant = std::nullopt);

struct UnionCheck {
  std::size_t r = 0;
  std::size_t union_size = 0;
  long double rhs = 0;  // r |s_r| - r(r-1)/2 ln J
  bool holds = false;
};

struct LowOmegaSelection {
  std::array<std::size_t, 3> indices{};  // positions in the input, last three of the sorted order
  std::array<std::size_t, 3> omegas{};
  std::vector<std::size_t> order;  // input positions, support size descending
  std::vector<UnionCheck> union_checks;  // r = 1 .. t
  bool union_inequality_holds = false;
  /// For each returned support: |s| <= |union| / (t - 2) + (t - 1)/2 ln J + 1.
  bool selection_bound_holds = false;
};

/// PreconditionError for t < 3, a zero entry, a prime factor > J, or a pair
/// with gcd > J (the message names the pair).
LowOmegaSelection select_low_omega(std::span<const std::uint64_t> bs, std::uint64_t J);

struct PellEntry {
  std::uint64_t offset = 0;
  std::uint64_t b = 0;  // squarefree
  std::uint64_t z = 0;  // x + offset = b z^2
};

struct PellSystem {
  std::uint64_t x = 0;
  std::uint64_t J = 0;
  std::vector<PellEntry> entries;
  bool product_is_square = false;
  std::uint64_t max_b_prime = 1;  // largest prime in any b
};

/// Squarefree split x + j_i = b_i z_i^2. Offsets must be strictly increasing
/// and start at 0; J is the last. When the whole product is a square every
/// b_i prime is checked to be <= J; gcd(b_i, b_k) <= J is checked always
/// (violations throw std::logic_error). ResourceError when x + J is beyond
/// the table's factoring reach.
PellSystem pell_system_decompose(std::uint64_t x, std::span<const std::uint64_t> offsets,
                                 const SpfTable& table);

inline constexpr long double kTnLowerDefaultConstant = 1.0L;

/// constant * (ln ln n)^(6/5) (ln ln ln n)^(-1/5). DomainError for n < 16
/// or constant < 0.
HeightBoundReport tn_lower_bound_eval(const mpz_class& n, long double constant = kTnLowerDefaultConstant);
/// Same bound from ln n directly; needs ln n >= ln 16.
long double tn_lower_bound_from_log(long double ln_n, long double constant);

struct TnLowerCheck {
  std::uint64_t x = 0;
  long double constant = 0;
  std::uint64_t scanned = 0;  // non-squares in [16, x]
  std::vector<std::uint64_t> violations;  // t_n below the bound
};

/// Exact t_n against the bound for non-square n in [16, x]; each search is
/// capped at floor(bound(n)), so exceeding the cap settles the comparison.
TnLowerCheck tn_lower_bound_check(std::uint64_t x, long double constant, const SpfTable& table,
                                  unsigned workers = 1);

}  // namespace tnlab
