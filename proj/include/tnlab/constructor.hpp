#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tnlab/arith.hpp"
#include "tnlab/gf2.hpp"

namespace tnlab {

/// Half-open interval (lo, hi] with its y-smooth count.
struct SmoothInterval {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t smooth_count = 0;
};

/// Intervals (kL, (k+1)L] inside [x / ln x, x] whose count of floor(y)-smooth
/// integers exceeds delta * L * Psi(x, y) / x, ascending. Empty when L > x.
/// Requires y < L and 0 <= delta < 1 (DomainError otherwise).
std::vector<SmoothInterval> find_smooth_rich_intervals(std::uint64_t x, long double y,
                                                       std::uint64_t L, long double delta);

struct SmallTnCertificate {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> offsets;  // witness offsets, all inside the interval
};

/// Pigeonhole over theta: if (lo, hi] holds more than pi(y) y-smooth
/// integers, some nonempty subset multiplies to a square; the least element
/// over all such subsets is returned with its witness, so t_n <= hi - n.
/// Returns nullopt when the smooth count is <= pi(y).
std::optional<SmallTnCertificate> build_small_tn(std::uint64_t lo, std::uint64_t hi,
                                                 long double y, const SpfTable& table);

struct SymdiffPair {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t size = 0;
};

/// Threshold between the exhaustive pair scan and the anchor scan.
inline constexpr std::size_t kExhaustivePairLimit = 4096;

/// Pair of subsets with large symmetric difference: the exact optimum for
/// up to kExhaustivePairLimit subsets, otherwise repeated farthest-from-anchor
/// scans. Ties resolve to the lexicographically smallest (i, j), i < j.
/// UsageError for fewer than two subsets or duplicates.
SymdiffPair max_symdiff_pair(const std::vector<TagSet>& subsets);

struct PipelineParameters {
  long double y = 0;
  long double L_formula = 0;
  std::uint64_t L = 0;  // floor(min(L_formula, sqrt(x)))
};

/// y = exp((sqrt2/2) sqrt(ln x ln ln x)),
/// L = exp((sqrt2 + (ln ln x)^(-1/2)) sqrt(ln x ln ln x)).
PipelineParameters small_tn_parameters(std::uint64_t x);
/// Same y; L = exp((sqrt2 / c) sqrt(ln x ln ln x)).
PipelineParameters curve_point_parameters(std::uint64_t x, long double c);

class PipelineFailed : public std::runtime_error {
 public:
  PipelineFailed(std::string stage, const std::string& detail);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineOptions {
  std::optional<long double> y;
  std::optional<std::uint64_t> L;
  long double delta = 0.25L;
  std::uint64_t seed = 1;
  std::size_t family_size = 4096;
};

struct StageTimings {
  double parameters_ms = 0;
  double intervals_ms = 0;
  double kernel_ms = 0;
  double family_ms = 0;
  double symdiff_ms = 0;
  double verify_ms = 0;
};

struct CurvePointCertificate {
  long double c = 0;
  std::uint64_t n = 0;
  std::uint64_t J = 0;
  std::vector<std::uint64_t> offsets;  // interior offsets 1 <= j_1 < ... < j_N < J
  std::uint64_t N = 0;
  /// XOR of theta over n, n + j_i, n + J is empty (always true on return).
  bool parity_empty = false;
  std::uint64_t required_N = 0;  // ceil(J^(1-c))
  bool meets_exponent = false;   // N >= required_N

  PipelineParameters parameters;
  SmoothInterval interval;
  std::uint64_t pi_y = 0;
  std::size_t kernel_dim = 0;
  std::size_t intervals_found = 0;
  std::size_t bucket_size = 0;
  StageTimings timings;
};

/// Smooth-rich interval, kernel cosets grouped by theta, maximal symmetric
/// difference, then the sorted members read as n, n + j_1, ..., n + J.
/// Throws PipelineFailed (with the failing stage) when the parameters
/// degenerate or no interval qualifies.
CurvePointCertificate construct_curve_point(std::uint64_t x, long double c, const SpfTable& table,
                                            const PipelineOptions& opts = {});

struct SmallTnEntry {
  SmoothInterval interval;
  std::optional<SmallTnCertificate> certificate;
  bool verified = false;
};

struct SmallTnRun {
  std::uint64_t x = 0;
  PipelineParameters parameters;
  long double delta = 0;
  std::vector<SmallTnEntry> entries;
  std::size_t successes = 0;
};

/// Smooth-rich intervals with build_small_tn applied to each; every
/// certificate is re-verified.
SmallTnRun run_small_tn_pipeline(std::uint64_t x, const SpfTable& table,
                                 const PipelineOptions& opts = {}, unsigned workers = 1);

}  // namespace tnlab
