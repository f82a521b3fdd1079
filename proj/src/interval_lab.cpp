#include "tnlab/interval_lab.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "tnlab/errors.hpp"
#include "tnlab/tn_engine.hpp"

namespace tnlab {

namespace {

void check_interval(std::uint64_t lo, std::uint64_t hi, const SpfTable& table) {
  if (lo >= hi) throw RangeError("interval (lo, hi] must be nonempty");
  if (!table.can_factor(hi)) throw RangeError("interval end beyond factorization reach");
}

// Local dense bitset over the odd primes occurring in the interval.
using Words = std::vector<std::uint64_t>;

std::vector<Words> local_parities(std::uint64_t lo, std::uint64_t hi, const SpfTable& table) {
  const auto supports = odd_prime_supports(lo + 1, hi - lo, table);
  std::map<std::uint64_t, std::size_t> index;
  for (const auto& s : supports)
    for (const auto p : s) index.emplace(p, 0);
  std::size_t k = 0;
  for (auto& [p, i] : index) i = k++;
  const std::size_t words = (k + 63) / 64 + 1;
  std::vector<Words> out(supports.size(), Words(words, 0));
  for (std::size_t e = 0; e < supports.size(); ++e)
    for (const auto p : supports[e]) {
      const auto i = index[p];
      out[e][i / 64] ^= std::uint64_t{1} << (i % 64);
    }
  return out;
}

bool all_zero(const Words& w) {
  return std::all_of(w.begin(), w.end(), [](std::uint64_t x) { return x == 0; });
}

}  // namespace

std::uint64_t count_B(std::uint64_t lo, std::uint64_t hi, const SpfTable& table) {
  check_interval(lo, hi, table);
  std::uint64_t b = 0;
  for (std::uint64_t n = lo + 1; n <= hi; ++n) {
    if (is_square(n)) {
      ++b;
      continue;
    }
    if (n == hi) continue;
    try {
      compute_tn(n, table, {.cap = hi - n});
      ++b;
    } catch (const CapExceeded&) {
    }
  }
  return b;
}

SquareSubsets enumerate_square_subsets(std::uint64_t lo, std::uint64_t hi, SubsetMode mode,
                                       const SpfTable& table) {
  check_interval(lo, hi, table);
  SquareSubsets out;
  out.mode = mode;

  if (mode == SubsetMode::kernel) {
    std::vector<TaggedVector> family;
    const auto supports = odd_prime_supports(lo + 1, hi - lo, table);
    for (std::uint64_t i = 0; i < supports.size(); ++i)
      family.push_back({lo + 1 + i, ParityVector::from_primes(supports[i])});
    out.subsets = nullspace_subsets(family);
    out.kernel_dim = static_cast<unsigned>(out.subsets.size());
    mpz_ui_pow_ui(out.count.get_mpz_t(), 2, out.kernel_dim);
    return out;
  }

  const std::uint64_t len = hi - lo;
  if (len > kBruteLengthLimit) {
    throw RangeError("brute enumeration limited to intervals of length " +
                     std::to_string(kBruteLengthLimit));
  }
  const auto parity = local_parities(lo, hi, table);
  // Gray-code walk: one XOR per subset.
  std::vector<std::uint64_t> masks{0};
  Words acc(parity.front().size(), 0);
  std::uint64_t gray = 0;
  for (std::uint64_t g = 1; g < (std::uint64_t{1} << len); ++g) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(g));
    gray ^= std::uint64_t{1} << bit;
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] ^= parity[bit][w];
    if (all_zero(acc)) masks.push_back(gray);
  }
  for (const auto m : masks) {
    std::vector<std::uint64_t> elems;
    for (std::uint64_t b = m; b != 0; b &= b - 1)
      elems.push_back(lo + 1 + static_cast<std::uint64_t>(std::countr_zero(b)));
    out.subsets.push_back(std::move(elems));
  }
  std::sort(out.subsets.begin(), out.subsets.end());
  out.count = static_cast<unsigned long>(out.subsets.size());
  out.kernel_dim = static_cast<unsigned>(std::bit_width(out.subsets.size()) - 1);
  return out;
}

IntervalReport check_interval_identity(std::uint64_t lo, std::uint64_t hi, std::uint64_t y,
                                       SubsetMode mode, const SpfTable& table) {
  IntervalReport r;
  r.lo = lo;
  r.hi = hi;
  r.y = y;
  r.mode = mode;
  r.B = count_B(lo, hi, table);
  r.square_subset_count = enumerate_square_subsets(lo, hi, mode, table).count;
  r.smooth_count = hi <= table.limit() ? smooth_in_interval(lo, hi, y, table).size()
                                       : smooth_in_interval_segmented(lo, hi, y).size();
  r.pi_y = y <= table.limit() ? table.prime_pi(y) : prime_pi(y);
  mpz_class two_b;
  mpz_ui_pow_ui(two_b.get_mpz_t(), 2, r.B);
  r.count_identity_holds = r.square_subset_count == two_b;
  r.smooth_bound_holds = r.B + r.pi_y >= r.smooth_count;
  return r;
}

}  // namespace tnlab
