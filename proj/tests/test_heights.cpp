#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tnlab/errors.hpp"
#include "tnlab/heights.hpp"

using namespace tnlab;

namespace {

std::vector<PellPoint> brute_pell(std::uint64_t J) {
  std::vector<PellPoint> out;
  for (std::uint64_t x = 1; x <= J * J; ++x) {
    const std::uint64_t v = x * (x + J);
    auto y = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
    while (y * y > v) --y;
    while ((y + 1) * (y + 1) <= v) ++y;
    if (y * y == v) out.push_back({x, y});
  }
  return out;
}

}  // namespace

TEST_CASE("pell_solutions examples") {
  CHECK(pell_solutions(3, 1000).solutions == std::vector<PellPoint>{{1, 2}});
  CHECK(pell_solutions(4, 1000).solutions.empty());
  CHECK(pell_solutions(1, 1000).solutions.empty());
  // 4 * 9 = 6^2
  CHECK(pell_solutions(5, 1000).solutions == std::vector<PellPoint>{{4, 6}});
  CHECK_THROWS_AS(pell_solutions(0, 10), DomainError);
}

TEST_CASE("pell_solutions matches brute force for J <= 200") {
  for (std::uint64_t J = 1; J <= 200; ++J) {
    const auto r = pell_solutions(J, J * J);
    CHECK(r.brute_agrees);
    CHECK(r.brute_limit == J * J);
    CHECK(r.solutions == brute_pell(J));
    for (const auto& p : r.solutions) {
      CHECK(p.x <= J * J);
      CHECK(p.y * p.y == p.x * (p.x + J));
    }
  }
}

TEST_CASE("pell_solutions at larger J") {
  const auto r = pell_solutions(720720, 100'000);
  CHECK(r.brute_agrees);
  for (const auto& p : r.solutions) {
    CHECK(p.x <= 720720ull * 720720ull);
    const auto v = static_cast<unsigned __int128>(p.x) * (p.x + 720720);
    CHECK(static_cast<unsigned __int128>(p.y) * p.y == v);
  }
}

TEST_CASE("beg_log_bound examples") {
  CHECK(beg_log_bound(3, 1).value == doctest::Approx(212.0 * 81 * std::log(12.0)).epsilon(1e-14));
  CHECK(beg_log_bound(4, 10).value ==
        doctest::Approx(212.0 * 256 * std::log(16.0) + 50.0 * 256 * std::log(10.0)).epsilon(1e-14));
  const auto d = beg_log_bound(3, 4).value - beg_log_bound(3, 2).value;
  CHECK(static_cast<double>(d) == doctest::Approx(50.0 * 81 * std::log(2.0)).epsilon(1e-12));
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 10, 400);
  CHECK(beg_log_bound(3, big).value ==
        doctest::Approx(212.0 * 81 * std::log(12.0) + 50.0 * 81 * 400 * std::log(10.0)).epsilon(1e-12));
  CHECK_THROWS_AS(beg_log_bound(2, 1), DomainError);
  CHECK_THROWS_AS(beg_log_bound(3, 0), DomainError);
  CHECK(!beg_log_bound(3, 1).constant_policy.empty());
}

TEST_CASE("small_s_log_bound") {
  CHECK(small_s_log_bound(1, 2, 1.0L).value == doctest::Approx(std::log(2.0)));
  const auto d = small_s_log_bound(2, 10);
  const double n = 4;
  CHECK(d.value == doctest::Approx(212 * std::pow(n, 4) * std::log(4 * n) + 50 * std::pow(n, 4) * 3 * std::log(10.0)));
  CHECK(d.value == doctest::Approx(static_cast<double>(beg_log_bound(4, 1000).value)));
  for (std::uint64_t s = 1; s < 9; ++s) {
    CHECK(small_s_log_bound(s + 1, 10, 2.0L).value > small_s_log_bound(s, 10, 2.0L).value);
    CHECK(small_s_log_bound(s + 1, 10).value > small_s_log_bound(s, 10).value);
  }
  CHECK_THROWS_AS(small_s_log_bound(5, 5), DomainError);
  CHECK_THROWS_AS(small_s_log_bound(0, 5), DomainError);
  CHECK(!small_s_log_bound(1, 2).constant_policy.empty());
  CHECK(!small_s_log_bound(1, 2, 3.0L).constant_policy.empty());
}

TEST_CASE("select_low_omega examples") {
  const std::vector<std::uint64_t> bs{30, 77, 13};
  const auto s = select_low_omega(bs, 13);
  CHECK(s.indices == std::array<std::size_t, 3>{2, 1, 0});
  CHECK(s.omegas == std::array<std::size_t, 3>{1, 2, 3});
  REQUIRE(s.union_checks.size() == 3);
  CHECK(s.union_checks[0].union_size == 3);
  CHECK(s.union_checks[0].rhs == doctest::Approx(3.0));
  CHECK(s.union_checks[0].holds);
  CHECK(s.union_inequality_holds);
  CHECK(s.selection_bound_holds);

  const std::vector<std::uint64_t> primes{2, 3, 5, 7};
  const auto p = select_low_omega(primes, 7);
  CHECK(p.omegas == std::array<std::size_t, 3>{1, 1, 1});

  CHECK_THROWS_AS(select_low_omega(std::vector<std::uint64_t>{2, 3}, 7), PreconditionError);
  CHECK_THROWS_AS(select_low_omega(std::vector<std::uint64_t>{2, 3, 17}, 13), PreconditionError);
  try {
    select_low_omega(std::vector<std::uint64_t>{30, 7, 30}, 13);
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("b_0, b_2") != std::string::npos);
  }
}

TEST_CASE("select_low_omega properties") {
  std::mt19937_64 rng(2);
  const std::uint64_t J = 60;
  std::vector<std::uint64_t> small;
  for (std::uint64_t q = 2; q <= J; ++q)
    if (oracle::is_prime(q)) small.push_back(q);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> bs;
    const std::size_t t = 3 + rng() % 8;
    int guard = 0;
    while (bs.size() < t && guard++ < 10'000) {
      std::uint64_t b = 1;
      for (const auto q : small)
        if (rng() % 5 == 0 && b <= UINT64_MAX / q) b *= q;
      bool ok = true;
      for (const auto c : bs) ok = ok && std::gcd(b, c) <= J;
      if (ok) bs.push_back(b);
    }
    if (bs.size() < 3) continue;
    const auto s = select_low_omega(bs, J);
    CHECK(s.selection_bound_holds);
    for (std::size_t k = 0; k < 3; ++k) CHECK(s.omegas[k] == oracle::factor(bs[s.indices[k]]).size());
    for (std::size_t k = 0; k + 1 < s.order.size(); ++k)
      CHECK(oracle::factor(bs[s.order[k]]).size() >= oracle::factor(bs[s.order[k + 1]]).size());
    CHECK(s.union_checks.front().holds);
  }
}

TEST_CASE("pell_system_decompose examples") {
  const auto t = build_spf_table(100'000);
  using E = std::vector<std::pair<std::uint64_t, std::uint64_t>>;
  auto bz = [](const PellSystem& s) {
    E out;
    for (const auto& e : s.entries) out.emplace_back(e.b, e.z);
    return out;
  };
  CHECK(bz(pell_system_decompose(2, std::vector<std::uint64_t>{0, 2}, t)) == E{{2, 1}, {1, 2}});
  CHECK(bz(pell_system_decompose(8, std::vector<std::uint64_t>{0, 1, 4}, t)) == E{{2, 2}, {1, 3}, {3, 2}});
  const auto s = pell_system_decompose(48, std::vector<std::uint64_t>{0, 2}, t);
  CHECK(bz(s) == E{{3, 4}, {2, 5}});
  CHECK(!s.product_is_square);

  // 14 * 15 * 18 * 20 * 21 = 1260^2
  const auto sq = pell_system_decompose(14, std::vector<std::uint64_t>{0, 1, 4, 6, 7}, t);
  CHECK(sq.product_is_square);
  CHECK(sq.max_b_prime <= 7);

  CHECK_THROWS_AS(pell_system_decompose(5, std::vector<std::uint64_t>{1, 2}, t), DomainError);
  CHECK_THROWS_AS(pell_system_decompose(5, std::vector<std::uint64_t>{0, 2, 2}, t), DomainError);
  const auto tiny = build_spf_table(100);
  CHECK_THROWS_AS(pell_system_decompose(1'000'000, std::vector<std::uint64_t>{0, 2}, tiny), ResourceError);
}

TEST_CASE("pell_system_decompose round trip") {
  const auto t = build_spf_table(1'000'000);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t x = 1 + rng() % 100'000'000;
    std::vector<std::uint64_t> offsets{0};
    const std::size_t k = 1 + rng() % 6;
    for (std::size_t i = 0; i < k; ++i) offsets.push_back(offsets.back() + 1 + rng() % 20);
    const auto s = pell_system_decompose(x, offsets, t);
    REQUIRE(s.entries.size() == offsets.size());
    for (const auto& e : s.entries) {
      CHECK(e.b * e.z * e.z == x + e.offset);
      for (const auto& [p, a] : oracle::factor(e.b)) CHECK(a == 1);
    }
  }
}

TEST_CASE("tn_lower_bound_eval") {
  // n = e^(e^e): the inner factor is exactly 1.
  const long double ln_n = std::exp(std::exp(1.0L));
  CHECK(static_cast<double>(tn_lower_bound_from_log(ln_n, 2.0L)) ==
        doctest::Approx(2.0 * std::exp(1.2)).epsilon(1e-12));
  CHECK(tn_lower_bound_eval(1000, 0).value == 0);
  const auto r = tn_lower_bound_eval(1'000'000);
  CHECK(r.value == doctest::Approx(3.20754).epsilon(1e-5));
  CHECK(!r.constant_policy.empty());
  CHECK_THROWS_AS(tn_lower_bound_eval(15), DomainError);
  mpz_class huge;
  mpz_ui_pow_ui(huge.get_mpz_t(), 10, 1000);
  CHECK(tn_lower_bound_eval(huge).value > r.value);
}

TEST_CASE("tn_lower_bound_check") {
  const auto t = build_spf_table(200'000);
  const auto c = tn_lower_bound_check(100'000, 1.0L, t, 2);
  CHECK(c.scanned == 100'000 - 15 - (316 - 3));
  for (const auto n : c.violations) {
    const auto b = tn_lower_bound_eval(n).value;
    const auto exact = oracle::brute_tn(n, 8);
    REQUIRE(exact.has_value());
    CHECK(static_cast<long double>(*exact) < b);
  }
}
