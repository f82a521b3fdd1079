#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tnlab/arith.hpp"

namespace tnlab {

inline constexpr long double kRhoMaxU = 50.0L;

/// Dickman-de Bruijn rho on [0, 50]. Exact on [0, 2] (1 and 1 - ln u);
/// beyond that a piecewise Taylor solution of u rho'(u) = -rho(u - 1) on
/// cells of width 2^-10, each seeded from the end of the previous cell.
/// Throws RangeError outside [0, 50]. Thread-safe.
long double dickman_rho(long double u);

/// floor(x^c + 1e-9) with x^c in long double. Integer powers land exactly.
std::uint64_t power_threshold(std::uint64_t x, long double c);

struct DistributionRow {
  long double c = 0;
  std::uint64_t threshold = 0;  // largest integer m <= x^c
  std::uint64_t count_tn = 0;
  std::uint64_t count_smooth = 0;
  std::int64_t diff = 0;  // count_tn - count_smooth
  long double normalized_diff = 0;  // diff * c * ln x / x
  long double rho_prediction = 0;   // rho(1/c)
};

struct DistributionTable {
  std::uint64_t x = 0;
  std::vector<DistributionRow> rows;  // ascending c
  std::uint64_t exceptional_count = 0;  // |E ∩ [2, x]|
  /// Rows whose t_n could not be settled. Always 0 with the threshold-cap
  /// policy; kept for the report schema.
  std::uint64_t excluded = 0;
};

/// Exact counts #{n <= x : t_n <= x^c} and #{n <= x : P+(n) <= x^c}. t_n is
/// resolved with the Granville-Selfridge shortcut, else by a search capped
/// at the largest threshold (exceeding it settles "t_n > x^c" exactly).
/// Each c must lie in (0, 1] (DomainError otherwise).
DistributionTable distribution_table(std::uint64_t x, std::span<const long double> cs,
                                     const SpfTable& table, unsigned workers = 1);

struct ExceptionalSet {
  std::uint64_t count = 0;
  std::vector<std::uint64_t> members;  // filled only on request
};

/// n in [2, x] with P+(n)^2 | n. The degenerate n = 1 is left out.
ExceptionalSet exceptional_set(std::uint64_t x, const SpfTable& table, bool with_members = true);

struct ConjectureEntry {
  std::uint64_t n = 0;
  std::uint64_t t = 0;
  long double ratio = 0;  // t_n / (ln n)^(1 - c)
};

struct ConjectureReport {
  std::uint64_t x = 0;
  long double c = 0;
  std::uint64_t scanned = 0;  // non-squares in [2, x]
  long double min_ratio = 0;
  std::uint64_t argmin = 0;
  std::vector<ConjectureEntry> entries;  // filled only on request
};

/// Empirical look at t_n >= (log n)^(1-c) over non-square n in [2, x].
ConjectureReport conjecture_scan(std::uint64_t x, long double c, const SpfTable& table,
                                 unsigned workers = 1, bool with_entries = false);

}  // namespace tnlab
