#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "tnlab/arith.hpp"
#include "tnlab/gf2.hpp"

namespace tnlab {

/// Longest interval the exponential enumeration accepts.
inline constexpr std::uint64_t kBruteLengthLimit = 30;

/// #{n in (lo, hi] : n + t_n <= hi}. Each t_n search is capped at hi - n,
/// which decides membership exactly.
std::uint64_t count_B(std::uint64_t lo, std::uint64_t hi, const SpfTable& table);

enum class SubsetMode { brute, kernel };

struct SquareSubsets {
  SubsetMode mode = SubsetMode::brute;
  /// brute: every square subset, lexicographic by element list (the empty
  /// set first). kernel: a kernel basis (each set XORs to a square).
  std::vector<std::vector<std::uint64_t>> subsets;
  unsigned kernel_dim = 0;
  mpz_class count;  // number of square subsets = 2^kernel_dim
};

/// Subsets S of (lo, hi] with a square product. Brute mode walks all
/// 2^(hi-lo) subsets (RangeError beyond kBruteLengthLimit); kernel mode
/// solves for the GF(2) kernel instead.
SquareSubsets enumerate_square_subsets(std::uint64_t lo, std::uint64_t hi, SubsetMode mode,
                                       const SpfTable& table);

struct IntervalReport {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t y = 0;
  SubsetMode mode = SubsetMode::brute;
  std::uint64_t B = 0;
  mpz_class square_subset_count;
  std::uint64_t smooth_count = 0;
  std::uint64_t pi_y = 0;
  /// square_subset_count == 2^B
  bool count_identity_holds = false;
  /// B >= smooth_count - pi_y
  bool smooth_bound_holds = false;
  bool ok() const { return count_identity_holds && smooth_bound_holds; }
};

IntervalReport check_interval_identity(std::uint64_t lo, std::uint64_t hi, std::uint64_t y,
                                       SubsetMode mode, const SpfTable& table);

}  // namespace tnlab
