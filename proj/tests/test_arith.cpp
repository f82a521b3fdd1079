#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tnlab/arith.hpp"
#include "tnlab/errors.hpp"

using namespace tnlab;

TEST_CASE("spf table basics") {
  const auto t10 = build_spf_table(10);
  CHECK(t10.spf(4) == 2);
  CHECK(t10.spf(9) == 3);
  CHECK(t10.spf(7) == 7);
  CHECK(build_spf_table(100).spf(91) == 7);
  CHECK_THROWS_AS(build_spf_table(1), RangeError);
  CHECK_THROWS_AS(build_spf_table(1000, 100), RangeError);
}

TEST_CASE("spf table invariants") {
  const auto t = build_spf_table(20000);
  for (std::uint64_t m = 2; m <= t.limit(); ++m) {
    const auto p = t.spf(m);
    REQUIRE(m % p == 0);
    REQUIRE(oracle::is_prime(p) == true);
    if (p == m) {
      REQUIRE(oracle::is_prime(m));
    } else {
      REQUIRE(std::uint64_t{p} * p <= m);
    }
  }
  CHECK(t.prime_pi(100) == 25);
}

TEST_CASE("factorize examples") {
  const auto t = build_spf_table(2000);
  const auto f12 = factorize(12, t);
  CHECK(f12.factors == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(f12.largest_prime() == 3);
  CHECK(f12.omega() == 2);

  const auto f1 = factorize(1, t);
  CHECK(f1.factors.empty());
  CHECK(f1.largest_prime() == 1);
  CHECK(f1.omega() == 0);

  CHECK(factorize(1260, t).factors == std::vector<PrimePower>{{2, 2}, {3, 2}, {5, 1}, {7, 1}});
  CHECK(factorize(1260, t).squarefree_kernel() == 35);

  CHECK_THROWS_AS(factorize(0, t), DomainError);
  CHECK_THROWS_AS(factorize(2001, t), RangeError);
}

TEST_CASE("factorize round trip up to 10^6") {
  const auto t = build_spf_table(1'000'000);
  for (std::uint64_t n = 1; n <= t.limit(); ++n) {
    const auto f = factorize(n, t);
    REQUIRE(f.value() == n);
    for (std::size_t i = 1; i < f.factors.size(); ++i)
      REQUIRE(f.factors[i - 1].prime < f.factors[i].prime);
  }
}

TEST_CASE("factorize_any and trial division agree beyond the table") {
  const auto t = build_spf_table(100'000);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> dist(100'001, 9'000'000'000ULL);
  for (int i = 0; i < 2000; ++i) {
    const auto n = dist(rng);
    const auto a = factorize_any(n, t);
    const auto b = factorize_trial(n);
    REQUIRE(a.factors == b.factors);
    REQUIRE(a.value() == n);
  }
  CHECK_THROWS_AS(factorize_any(100'001ULL * 100'001ULL, t), RangeError);
}

TEST_CASE("smooth_in_interval examples") {
  const auto t = build_spf_table(1000);
  CHECK(smooth_in_interval(48, 56, 7, t) == std::vector<std::uint64_t>{49, 50, 54, 56});
  CHECK(smooth_in_interval(2, 6, 2, t) == std::vector<std::uint64_t>{4});
  CHECK(smooth_in_interval(10, 12, 100, t) == std::vector<std::uint64_t>{11, 12});
  CHECK_THROWS_AS(smooth_in_interval(6, 6, 2, t), RangeError);
  CHECK_THROWS_AS(smooth_in_interval(6, 1001, 2, t), RangeError);
}

TEST_CASE("psi_count examples") {
  const auto t = build_spf_table(1000);
  CHECK(psi_count(100, 5, t) == 34);
  CHECK(psi_count(10, 10, t) == 10);
  CHECK(psi_count(10, 1, t) == 1);
  CHECK(psi_count(1, 1, t) == 1);
}

TEST_CASE("psi_count consistency and monotonicity") {
  const auto t = build_spf_table(3000);
  for (std::uint64_t x = 2; x <= 3000; x += 97) {
    std::uint64_t prev_y = 0;
    for (std::uint64_t y = 1; y <= 60; ++y) {
      const auto c = psi_count(x, y, t);
      REQUIRE(c == smooth_in_interval(0, x, y, t).size());
      REQUIRE(c >= prev_y);
      REQUIRE(c >= psi_count(x - 1, y, t));
      prev_y = c;
    }
  }
}

TEST_CASE("segmented smooth sieve agrees with the table") {
  const auto t = build_spf_table(200'000);
  for (std::uint64_t y : {2, 7, 20, 71, 500}) {
    CHECK(smooth_in_interval_segmented(150'000, 200'000, y) ==
          smooth_in_interval(150'000, 200'000, y, t));
    CHECK(psi_count_segmented(200'000, y) == psi_count(200'000, y, t));
  }
  CHECK(prime_pi(70) == 19);
}

TEST_CASE("odd prime supports: table path and block sieve path") {
  const auto t = build_spf_table(5000);
  const auto small = odd_prime_supports(1, 5000, t);
  for (std::uint64_t m = 1; m <= 5000; ++m) REQUIRE(small[m - 1] == oracle::odd_primes(m));
  const std::uint64_t lo = 20'000'000;
  const auto big = odd_prime_supports(lo, 3000, t);
  for (std::uint64_t i = 0; i < 3000; ++i) REQUIRE(big[i] == oracle::odd_primes(lo + i));
}

TEST_CASE("isqrt") {
  for (std::uint64_t r : {0ULL, 1ULL, 2ULL, 3037000499ULL, 4294967295ULL}) {
    CHECK(isqrt(r * r) == r);
    if (r > 0) CHECK(isqrt(r * r - 1) == r - 1);
  }
  CHECK(isqrt(UINT64_MAX) == 4294967295ULL);
  CHECK(is_square(49));
  CHECK_FALSE(is_square(50));
}
