#include "tnlab/distribution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "tnlab/errors.hpp"
#include "tnlab/tn_engine.hpp"

namespace tnlab {

namespace {

constexpr int kCellsPerUnit = 1024;
constexpr long double kCell = 1.0L / kCellsPerUnit;
constexpr int kDegree = 12;

using Poly = std::array<long double, kDegree + 1>;

long double horner(const Poly& p, long double s) {
  long double v = 0;
  for (int k = kDegree; k >= 0; --k) v = v * s + p[k];
  return v;
}

// Cells cover [1, kRhoMaxU]; cell i spans [1 + i*h, 1 + (i+1)*h] and holds
// rho as a polynomial in the local offset s.
class RhoGrid {
 public:
  RhoGrid() {
    const int cells = static_cast<int>((kRhoMaxU - 1) * kCellsPerUnit) + 1;
    cells_.resize(cells);
    for (int i = 0; i < cells; ++i) {
      const long double a = 1 + static_cast<long double>(i) * kCell;
      // rho(u - 1) on the matching cell one unit back; rho = 1 on [0, 1].
      Poly q{};
      if (i < kCellsPerUnit) {
        q[0] = 1;
      } else {
        q = cells_[i - kCellsPerUnit];
      }
      Poly& p = cells_[i];
      p = {};
      p[0] = i < kCellsPerUnit ? 1 - std::log(a) : horner(cells_[i - 1], kCell);
      // (a + s) p'(s) = -q(s)  =>  a (k+1) p_{k+1} = -q_k - k p_k
      for (int k = 0; k < kDegree; ++k) p[k + 1] = (-q[k] - k * p[k]) / (a * (k + 1));
    }
  }

  long double operator()(long double u) const {
    if (u <= 1) return 1;
    if (u <= 2) return 1 - std::log(u);
    auto i = static_cast<std::size_t>((u - 1) * kCellsPerUnit);
    i = std::min(i, cells_.size() - 1);
    return horner(cells_[i], u - 1 - static_cast<long double>(i) * kCell);
  }

 private:
  std::vector<Poly> cells_;
};

}  // namespace

long double dickman_rho(long double u) {
  if (!(u >= 0) || u > kRhoMaxU) throw RangeError("dickman_rho defined here for 0 <= u <= 50");
  static const RhoGrid grid;
  return grid(u);
}

std::uint64_t power_threshold(std::uint64_t x, long double c) {
  const long double v = std::pow(static_cast<long double>(x), c) + 1e-9L;
  return static_cast<std::uint64_t>(std::floor(v));
}

ExceptionalSet exceptional_set(std::uint64_t x, const SpfTable& table, bool with_members) {
  if (x < 2) throw DomainError("exceptional_set needs x >= 2");
  if (x > table.limit()) throw RangeError("x exceeds sieve limit");
  ExceptionalSet out;
  for (std::uint64_t n = 2; n <= x; ++n) {
    const auto f = factorize(n, table);
    if (f.factors.back().exponent >= 2) {
      ++out.count;
      if (with_members) out.members.push_back(n);
    }
  }
  return out;
}

DistributionTable distribution_table(std::uint64_t x, std::span<const long double> cs,
                                     const SpfTable& table, unsigned workers) {
  if (x < 1) throw DomainError("distribution_table needs x >= 1");
  if (x > table.limit()) throw RangeError("x exceeds sieve limit");
  if (cs.empty()) throw UsageError("distribution_table needs at least one c");
  std::vector<long double> sorted(cs.begin(), cs.end());
  for (const auto c : sorted)
    if (!(c > 0 && c <= 1)) throw DomainError("each c must lie in (0, 1]");
  std::sort(sorted.begin(), sorted.end());

  std::uint64_t max_threshold = 1;
  for (const auto c : sorted) max_threshold = std::max(max_threshold, power_threshold(x, c));
  if (!table.can_factor(x + max_threshold)) {
    throw RangeError("sieve limit too small for x + x^c = " + std::to_string(x + max_threshold));
  }

  // Per n: t_n if it is <= max_threshold, else a sentinel above every threshold.
  constexpr auto kAbove = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> capped_t(x);
  parallel_for(x, workers, [&](std::uint64_t i) {
    const std::uint64_t n = i + 1;
    try {
      capped_t[i] = compute_tn(n, table, {.cap = max_threshold, .use_shortcut = true}).t;
    } catch (const CapExceeded&) {
      capped_t[i] = kAbove;
    }
  });

  std::vector<std::uint64_t> largest(x);
  for (std::uint64_t n = 1; n <= x; ++n) largest[n - 1] = factorize(n, table).largest_prime();

  DistributionTable out;
  out.x = x;
  out.exceptional_count = x >= 2 ? exceptional_set(x, table, false).count : 0;
  const long double log_x = std::log(static_cast<long double>(x));
  for (const auto c : sorted) {
    DistributionRow row;
    row.c = c;
    row.threshold = power_threshold(x, c);
    for (std::uint64_t n = 1; n <= x; ++n) {
      if (capped_t[n - 1] <= row.threshold) ++row.count_tn;
      if (largest[n - 1] <= row.threshold) ++row.count_smooth;
    }
    row.diff = static_cast<std::int64_t>(row.count_tn) - static_cast<std::int64_t>(row.count_smooth);
    row.normalized_diff = static_cast<long double>(row.diff) * c * log_x / static_cast<long double>(x);
    row.rho_prediction = dickman_rho(1 / c);
    out.rows.push_back(row);
  }
  return out;
}

ConjectureReport conjecture_scan(std::uint64_t x, long double c, const SpfTable& table,
                                 unsigned workers, bool with_entries) {
  if (x < 2) throw DomainError("conjecture_scan needs x >= 2");
  if (!(c > 0 && c < 1)) throw DomainError("c must lie in (0, 1)");
  const auto rows = scan_tn(2, x, table, {.use_shortcut = true}, workers);
  ConjectureReport out;
  out.x = x;
  out.c = c;
  out.min_ratio = std::numeric_limits<long double>::infinity();
  for (const auto& r : rows) {
    if (is_square(r.n)) continue;
    if (r.cap_exceeded) throw ResourceError("t_" + std::to_string(r.n) + " exceeded the search limit");
    ++out.scanned;
    const long double ratio =
        static_cast<long double>(r.t) / std::pow(std::log(static_cast<long double>(r.n)), 1 - c);
    if (ratio < out.min_ratio) {
      out.min_ratio = ratio;
      out.argmin = r.n;
    }
    if (with_entries) out.entries.push_back({r.n, r.t, ratio});
  }
  return out;
}

}  // namespace tnlab
