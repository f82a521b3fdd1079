#include "tnlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tnlab/errors.hpp"

namespace tnlab {

std::uint64_t isqrt(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && (r > UINT32_MAX || r * r > n)) --r;
  while (r + 1 <= UINT32_MAX && (r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(std::uint64_t n) {
  const auto r = isqrt(n);
  return r * r == n;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::uint64_t prime_pi(std::uint64_t y) { return primes_up_to(y).size(); }

SpfTable::SpfTable(std::uint64_t limit, std::uint64_t cap) : limit_(limit) {
  if (limit < 2 || limit > cap || limit > UINT32_MAX) {
    throw RangeError("sieve limit " + std::to_string(limit) + " outside [2, " +
                     std::to_string(std::min<std::uint64_t>(cap, UINT32_MAX)) + "]");
  }
  // Linear sieve: each composite is crossed out once, by its smallest prime.
  spf_.assign(limit + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
    }
    for (const std::uint32_t p : primes_) {
      if (p > spf_[i] || i * p > limit) break;
      spf_[i * p] = p;
    }
  }
}

std::uint64_t SpfTable::prime_pi(std::uint64_t y) const {
  if (y > limit_) throw RangeError("prime_pi argument exceeds sieve limit");
  return static_cast<std::uint64_t>(std::upper_bound(primes_.begin(), primes_.end(), y) -
                                    primes_.begin());
}

bool SpfTable::can_factor(std::uint64_t m) const {
  return m <= limit_ || (limit_ <= UINT32_MAX && m / limit_ <= limit_);
}

SpfTable build_spf_table(std::uint64_t limit, std::uint64_t cap) { return SpfTable(limit, cap); }

std::uint64_t FactorizationRecord::squarefree_kernel() const {
  std::uint64_t k = 1;
  for (const auto& [p, e] : factors)
    if (e % 2 == 1) k *= p;
  return k;
}

std::uint64_t FactorizationRecord::value() const {
  std::uint64_t v = 1;
  for (const auto& [p, e] : factors)
    for (std::uint32_t i = 0; i < e; ++i) v *= p;
  return v;
}

FactorizationRecord factorize(std::uint64_t n, const SpfTable& table) {
  if (n == 0) throw DomainError("cannot factorize 0");
  if (n > table.limit()) throw RangeError("n=" + std::to_string(n) + " exceeds sieve limit");
  FactorizationRecord rec{n, {}};
  while (n > 1) {
    const std::uint32_t p = table.spf(n);
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    rec.factors.push_back({p, e});
  }
  return rec;
}

namespace {

template <typename PrimeRange>
FactorizationRecord trial_divide(std::uint64_t n, const PrimeRange& primes) {
  FactorizationRecord rec{n, {}};
  for (const auto p : primes) {
    if (std::uint64_t{p} * p > n) break;
    if (n % p != 0) continue;
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    rec.factors.push_back({p, e});
  }
  if (n > 1) rec.factors.push_back({n, 1});
  return rec;
}

}  // namespace

FactorizationRecord factorize_any(std::uint64_t n, const SpfTable& table) {
  if (n == 0) throw DomainError("cannot factorize 0");
  if (n <= table.limit()) return factorize(n, table);
  if (!table.can_factor(n)) {
    throw RangeError("n=" + std::to_string(n) + " beyond the square of the sieve limit");
  }
  return trial_divide(n, table.primes());
}

FactorizationRecord factorize_trial(std::uint64_t n) {
  if (n == 0) throw DomainError("cannot factorize 0");
  FactorizationRecord rec{n, {}};
  auto strip = [&](std::uint64_t p) {
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) rec.factors.push_back({p, e});
  };
  strip(2);
  strip(3);
  for (std::uint64_t p = 5; p <= n / p; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) rec.factors.push_back({n, 1});
  return rec;
}

std::vector<std::uint64_t> smooth_in_interval(std::uint64_t lo, std::uint64_t hi, std::uint64_t y,
                                              const SpfTable& table) {
  if (lo >= hi) throw RangeError("empty or reversed interval");
  if (hi > table.limit()) throw RangeError("interval exceeds sieve limit");
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = lo + 1; n <= hi; ++n) {
    // Largest prime factor via the spf chain; 1 has none.
    std::uint64_t m = n;
    std::uint64_t largest = 1;
    while (m > 1) {
      largest = table.spf(m);
      m /= largest;
    }
    if (largest <= y) out.push_back(n);
  }
  return out;
}

std::uint64_t psi_count(std::uint64_t x, std::uint64_t y, const SpfTable& table) {
  if (x == 0) return 0;
  if (x > table.limit()) throw RangeError("x exceeds sieve limit");
  // Counting n = 1 explicitly keeps the half-open interval (0, x] valid.
  return x == 1 ? 1 : smooth_in_interval(0, x, y, table).size();
}

std::vector<std::uint64_t> smooth_in_interval_segmented(std::uint64_t lo, std::uint64_t hi,
                                                        std::uint64_t y) {
  if (lo >= hi) throw RangeError("empty or reversed interval");
  const auto primes = primes_up_to(std::min(y, hi));
  std::vector<std::uint64_t> out;
  constexpr std::uint64_t kSegment = 1 << 16;
  std::vector<std::uint64_t> rem;
  for (std::uint64_t base = lo + 1; base <= hi; base += kSegment) {
    const std::uint64_t top = std::min(hi, base + kSegment - 1);
    rem.resize(top - base + 1);
    for (std::uint64_t i = 0; i < rem.size(); ++i) rem[i] = base + i;
    for (const std::uint64_t p : primes) {
      for (std::uint64_t m = (base + p - 1) / p * p; m <= top; m += p) {
        auto& r = rem[m - base];
        do r /= p;
        while (r % p == 0);
      }
    }
    for (std::uint64_t i = 0; i < rem.size(); ++i)
      if (rem[i] == 1) out.push_back(base + i);
  }
  return out;
}

std::uint64_t psi_count_segmented(std::uint64_t x, std::uint64_t y) {
  if (x == 0) return 0;
  return x == 1 ? 1 : smooth_in_interval_segmented(0, x, y).size();
}

std::vector<std::vector<std::uint64_t>> odd_prime_supports(std::uint64_t lo, std::uint64_t count,
                                                            const SpfTable& table) {
  if (lo == 0) throw DomainError("odd_prime_supports requires lo >= 1");
  std::vector<std::vector<std::uint64_t>> out(count);
  if (count == 0) return out;
  const std::uint64_t hi = lo + count - 1;

  if (hi <= table.limit()) {
    for (std::uint64_t i = 0; i < count; ++i) {
      std::uint64_t m = lo + i;
      while (m > 1) {
        const std::uint32_t p = table.spf(m);
        bool odd = false;
        while (m % p == 0) {
          m /= p;
          odd = !odd;
        }
        if (odd) out[i].push_back(p);
      }
    }
    return out;
  }

  if (!table.can_factor(hi)) {
    throw RangeError("block end " + std::to_string(hi) + " beyond the square of the sieve limit");
  }
  std::vector<std::uint64_t> rem(count);
  for (std::uint64_t i = 0; i < count; ++i) rem[i] = lo + i;
  for (const std::uint64_t p : table.primes()) {
    if (p * p > hi) break;
    for (std::uint64_t m = (lo + p - 1) / p * p; m <= hi; m += p) {
      auto& r = rem[m - lo];
      bool odd = false;
      do {
        r /= p;
        odd = !odd;
      } while (r % p == 0);
      if (odd) out[m - lo].push_back(p);
    }
  }
  // Whatever survives is a single prime above sqrt(hi).
  for (std::uint64_t i = 0; i < count; ++i)
    if (rem[i] > 1) out[i].push_back(rem[i]);
  return out;
}

}  // namespace tnlab
