#include "tnlab/tn_engine.hpp"

#include <algorithm>
#include <string>

#include "tnlab/errors.hpp"

namespace tnlab {

namespace {

constexpr std::uint64_t kBlock = 4096;

std::uint64_t initial_cap(std::uint64_t n) {
  const std::uint64_t two_n = 2 * n;
  std::uint64_t r = isqrt(two_n);
  if (r * r < two_n) ++r;
  return 4 * r + 16;
}

ParityVector parity_of(std::uint64_t m, const SpfTable& table) {
  const auto supports = odd_prime_supports(m, 1, table);
  return ParityVector::from_primes(supports.front());
}

}  // namespace

CapExceeded::CapExceeded(std::uint64_t n, std::uint64_t searched, std::size_t rank)
    : std::runtime_error("t_" + std::to_string(n) + " exceeds cap " + std::to_string(searched)),
      n_(n),
      searched_(searched),
      rank_(rank) {}

std::optional<std::uint64_t> gs_shortcut(std::uint64_t n, const SpfTable& table) {
  if (n < 2 || is_square(n)) throw DomainError("gs_shortcut needs a non-square n >= 2");
  const std::uint64_t p = factorize_any(n, table).largest_prime();
  // P+ > sqrt(2n) + 1  <=>  (P+ - 1)^2 > 2n
  const unsigned __int128 d = p - 1;
  if (d * d > static_cast<unsigned __int128>(2) * n) return p;
  return std::nullopt;
}

TnResult compute_tn(std::uint64_t n, const SpfTable& table, const TnOptions& opts) {
  if (n == 0) throw DomainError("t_n is defined for n >= 1");
  TnResult result{.n = n, .t = 0, .witness = {}};
  if (is_square(n)) return result;

  if (opts.use_shortcut) {
    if (const auto s = gs_shortcut(n, table)) {
      result.t = *s;
      result.shortcut_used = true;
      if (!opts.shortcut_witness) return result;
      TnOptions full{.cap = *s};
      result.witness = compute_tn(n, table, full).witness;
      return result;
    }
  }

  const std::uint64_t limit = opts.cap.value_or(kHardOffsetLimit);
  std::uint64_t soft = opts.cap ? limit : std::min(limit, initial_cap(n));

  EchelonBasis basis;
  // Residual of theta(n) against the basis. Rows are never rewritten, so
  // the residual only moves when a new row lands on its leading prime.
  EchelonBasis::Reduction target{parity_of(n, table), {}};
  std::uint64_t j = 0;
  while (j < limit) {
    const std::uint64_t block = std::min({soft - j, limit - j, kBlock});
    const auto supports = odd_prime_supports(n + j + 1, block, table);
    for (const auto& support : supports) {
      ++j;
      const auto outcome = basis.insert(ParityVector::from_primes(support), j);
      if (!outcome.extended || outcome.pivot != target.residual.pivot()) continue;
      target = basis.reduce(std::move(target.residual), std::move(target.combination));
      if (target.residual.empty()) {
        result.t = j;
        result.witness = std::move(target.combination);
        return result;
      }
    }
    if (j >= soft && soft < limit) soft = std::min(limit, soft * 2);
  }
  throw CapExceeded(n, j, basis.rank());
}

bool verify_witness(std::uint64_t n, std::span<const std::uint64_t> witness,
                    const SpfTable& table) {
  if (n == 0) throw DomainError("verify_witness needs n >= 1");
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (witness[i] == 0 || (i > 0 && witness[i] <= witness[i - 1])) {
      throw UsageError("witness offsets must be positive and strictly increasing");
    }
  }
  ParityVector acc = parity_of(n, table);
  for (const auto j : witness) acc ^= parity_of(n + j, table);
  return acc.empty();
}

std::vector<TnResult> scan_tn(std::uint64_t lo, std::uint64_t hi, const SpfTable& table,
                              const TnOptions& opts, unsigned workers) {
  if (lo < 1 || lo > hi) throw RangeError("scan needs 1 <= lo <= hi");
  std::vector<TnResult> rows(hi - lo + 1);
  parallel_for(rows.size(), workers, [&](std::uint64_t i) {
    const std::uint64_t n = lo + i;
    try {
      rows[i] = compute_tn(n, table, opts);
    } catch (const CapExceeded& e) {
      rows[i] = TnResult{.n = n, .t = e.searched(), .witness = {}, .shortcut_used = false, .cap_exceeded = true};
    }
  });
  return rows;
}

}  // namespace tnlab
