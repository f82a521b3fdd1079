#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tnlab/arith.hpp"
#include "tnlab/gf2.hpp"

namespace tnlab {

/// Offsets searched before giving up when no explicit cap is set.
inline constexpr std::uint64_t kHardOffsetLimit = 10'000'000;

struct TnOptions {
  /// Hard cap on offsets; when unset the default schedule applies
  /// (4*ceil(sqrt(2n)) + 16, doubled up to kHardOffsetLimit).
  std::optional<std::uint64_t> cap;
  bool use_shortcut = false;
  /// Recover a witness even when the shortcut decides t.
  bool shortcut_witness = false;
};

struct TnResult {
  std::uint64_t n = 0;
  std::uint64_t t = 0;
  /// Offsets j_1 < ... < j_s = t. Empty for squares, and for shortcut rows
  /// unless a witness was requested.
  std::vector<std::uint64_t> witness;
  bool shortcut_used = false;
  /// Only set by scan_tn: t was not found within the cap; t holds the cap.
  bool cap_exceeded = false;
};

/// Thrown when the search reaches its cap before n's vector enters the span.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::uint64_t n, std::uint64_t searched, std::size_t rank);
  std::uint64_t n() const { return n_; }
  /// Offsets 1..searched were inserted; t_n > searched.
  std::uint64_t searched() const { return searched_; }
  std::size_t rank() const { return rank_; }

 private:
  std::uint64_t n_;
  std::uint64_t searched_;
  std::size_t rank_;
};

/// Smallest t with theta(n) in span(theta(n+1), ..., theta(n+t)), plus the
/// witness read off the basis combination. Factorizations beyond the table
/// limit use block trial division (table.limit()^2 must cover n + cap).
TnResult compute_tn(std::uint64_t n, const SpfTable& table, const TnOptions& opts = {});

/// Granville-Selfridge: if P+(n) > sqrt(2n) + 1 then t_n = P+(n).
/// Requires n >= 2 and n not a square (DomainError otherwise).
std::optional<std::uint64_t> gs_shortcut(std::uint64_t n, const SpfTable& table);

/// True iff n * prod(n + j) is a square, decided on parity vectors.
bool verify_witness(std::uint64_t n, std::span<const std::uint64_t> witness,
                    const SpfTable& table);

/// One result per n in [lo, hi], ascending. Rows are computed in parallel
/// chunks and merged by n, so content does not depend on `workers`.
/// CapExceeded becomes a flagged row.
std::vector<TnResult> scan_tn(std::uint64_t lo, std::uint64_t hi, const SpfTable& table,
                              const TnOptions& opts = {.use_shortcut = true},
                              unsigned workers = 1);

/// Runs fn(i) for i in [0, count) on up to `workers` threads, in contiguous
/// chunks. fn must only touch slot i of any shared output.
template <typename Fn>
void parallel_for(std::uint64_t count, unsigned workers, Fn&& fn);

}  // namespace tnlab

#include "tnlab/detail/parallel.hpp"
