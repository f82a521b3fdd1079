#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "tnlab/constructor.hpp"
#include "tnlab/errors.hpp"
#include "tnlab/tn_engine.hpp"

using namespace tnlab;

TEST_CASE("find_smooth_rich_intervals examples") {
  const auto list = find_smooth_rich_intervals(10'000, 20, 100, 0.5L);
  REQUIRE(!list.empty());
  const auto t = build_spf_table(20'000);
  const long double threshold = 0.5L * 100 * psi_count(10'000, 20, t) / 10'000.0L;
  for (const auto& iv : list) {
    CHECK(iv.hi - iv.lo == 100);
    CHECK(iv.lo % 100 == 0);
    CHECK(iv.hi <= 10'000);
    CHECK(iv.lo >= 1085);  // 10^4 / ln 10^4 ~ 1085.7
    CHECK(iv.smooth_count == smooth_in_interval(iv.lo, iv.hi, 20, t).size());
    CHECK(static_cast<long double>(iv.smooth_count) > threshold);
  }
  CHECK(std::is_sorted(list.begin(), list.end(),
                       [](const SmoothInterval& a, const SmoothInterval& b) { return a.lo < b.lo; }));

  const auto all = find_smooth_rich_intervals(10'000, 20, 100, 0);
  CHECK(all.size() >= list.size());
  std::uint64_t positive = 0;
  for (std::uint64_t k = 11; (k + 1) * 100 <= 10'000; ++k)
    positive += !smooth_in_interval(k * 100, (k + 1) * 100, 20, t).empty();
  CHECK(all.size() == positive);

  CHECK(find_smooth_rich_intervals(100, 5, 101, 0.25L).empty());
  CHECK_THROWS_AS(find_smooth_rich_intervals(10'000, 200, 100, 0.25L), DomainError);
  CHECK_THROWS_AS(find_smooth_rich_intervals(10'000, 20, 100, 1), DomainError);
}

TEST_CASE("build_small_tn examples") {
  const auto t = build_spf_table(10'000);
  // (48, 56] has only four 7-smooth members, one short of pi(7) + 1.
  CHECK(!build_small_tn(48, 56, 7, t).has_value());

  const auto a = build_small_tn(47, 56, 7, t);
  REQUIRE(a.has_value());
  // 48 * 50 * 54 = 360^2 undercuts the lone square 49.
  CHECK(a->n == 48);
  CHECK(a->offsets == std::vector<std::uint64_t>{2, 6});
  const auto sq = build_small_tn(48, 60, 7, t);
  REQUIRE(sq.has_value());
  CHECK(sq->n == 49);
  CHECK(sq->offsets.empty());

  const auto b = build_small_tn(1, 6, 3, t);
  REQUIRE(b.has_value());
  CHECK(b->n == 2);
  CHECK(b->offsets == std::vector<std::uint64_t>{1, 4});

  CHECK(!build_small_tn(10, 12, 3, t).has_value());
  CHECK_THROWS_AS(build_small_tn(6, 6, 3, t), RangeError);
}

TEST_CASE("build_small_tn agrees with compute_tn") {
  const auto t = build_spf_table(100'000);
  std::mt19937_64 rng(11);
  int built = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const std::uint64_t lo = 1 + rng() % 5000;
    const std::uint64_t len = 16 + rng() % 40;
    const long double y = 3 + static_cast<long double>(rng() % 20);
    const auto cert = build_small_tn(lo, lo + len, y, t);
    const auto smooth = smooth_in_interval(lo, lo + len, static_cast<std::uint64_t>(y), t);
    CHECK(cert.has_value() == (smooth.size() > oracle::pi(static_cast<std::uint64_t>(y))));
    if (!cert) continue;
    ++built;
    CHECK(cert->n > lo);
    CHECK(verify_witness(cert->n, cert->offsets, t));
    if (!cert->offsets.empty()) CHECK(cert->n + cert->offsets.back() <= lo + len);
    CHECK(compute_tn(cert->n, t).t <= len);

    // Least element: nothing smaller in the interval starts an in-interval square product.
    std::vector<std::uint64_t> members{cert->n};
    for (const auto o : cert->offsets) members.push_back(cert->n + o);
    CHECK(oracle::product_is_square(members));
  }
  CHECK(built > 30);
}

TEST_CASE("build_small_tn picks the least element") {
  const auto t = build_spf_table(10'000);
  for (std::uint64_t lo = 1; lo < 200; lo += 7) {
    const std::uint64_t hi = lo + 14;
    const auto cert = build_small_tn(lo, hi, 13, t);
    if (!cert) continue;
    const auto smooth = smooth_in_interval(lo, hi, 13, t);
    // Brute force over subsets of the smooth members for the least start.
    std::uint64_t least = UINT64_MAX;
    const std::size_t m = smooth.size();
    REQUIRE(m <= 20);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      std::vector<std::uint64_t> pick;
      for (std::size_t i = 0; i < m; ++i)
        if (mask >> i & 1) pick.push_back(smooth[i]);
      if (oracle::product_is_square(pick)) least = std::min(least, pick.front());
    }
    CHECK(cert->n == least);
  }
}

namespace {

std::size_t exhaustive_best(const std::vector<TagSet>& s) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) best = std::max(best, symmetric_difference(s[i], s[j]).size());
  return best;
}

}  // namespace

TEST_CASE("max_symdiff_pair examples") {
  std::vector<TagSet> all;
  const int Q = 6;
  for (unsigned mask = 0; mask < (1u << Q); ++mask) {
    TagSet s;
    for (int b = 0; b < Q; ++b)
      if (mask >> b & 1) s.push_back(b + 1);
    all.push_back(s);
  }
  const auto p = max_symdiff_pair(all);
  CHECK(p.size == Q);
  CHECK(p.i == 0);
  CHECK(p.j == all.size() - 1);

  const auto q = max_symdiff_pair({{1}, {2}});
  CHECK(q.i == 0);
  CHECK(q.j == 1);
  CHECK(q.size == 2);

  CHECK_THROWS_AS(max_symdiff_pair({{1}}), UsageError);
  CHECK_THROWS_AS(max_symdiff_pair({{1}, {2}, {1}}), UsageError);
}

TEST_CASE("max_symdiff_pair matches the exhaustive oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::set<TagSet> distinct;
    while (distinct.size() < 256) {
      TagSet s;
      for (Tag k = 1; k <= 64; ++k)
        if (rng() % 4 == 0) s.push_back(k);
      distinct.insert(s);
    }
    std::vector<TagSet> subsets(distinct.begin(), distinct.end());
    std::shuffle(subsets.begin(), subsets.end(), rng);
    const auto p = max_symdiff_pair(subsets);
    CHECK(p.i < p.j);
    CHECK(p.size >= 1);
    CHECK(p.size == symmetric_difference(subsets[p.i], subsets[p.j]).size());
    CHECK(p.size == exhaustive_best(subsets));
  }
}

TEST_CASE("max_symdiff_pair anchor scan above the exhaustive limit") {
  std::mt19937_64 rng(9);
  std::set<TagSet> distinct;
  while (distinct.size() < kExhaustivePairLimit + 100) {
    TagSet s;
    for (Tag k = 1; k <= 40; ++k)
      if (rng() & 1) s.push_back(k);
    distinct.insert(s);
  }
  std::vector<TagSet> subsets(distinct.begin(), distinct.end());
  const auto p = max_symdiff_pair(subsets);
  CHECK(p.i < p.j);
  CHECK(p.size == symmetric_difference(subsets[p.i], subsets[p.j]).size());
  // Q = 12, N = 40: the guaranteed floor 12 / (6 ln 40) is below 1.
  CHECK(p.size >= 1);
}

TEST_CASE("pipeline parameters") {
  const auto p = small_tn_parameters(1'000'000);
  CHECK(p.y > 2);
  CHECK(p.L <= 1000);
  CHECK(p.L_formula > p.y);
  const auto q = curve_point_parameters(1'000'000, 0.5L);
  CHECK(q.y == doctest::Approx(static_cast<double>(p.y)));
  CHECK(q.L == 1000);
  CHECK_THROWS_AS(curve_point_parameters(1'000'000, 1), DomainError);
  CHECK_THROWS_AS(small_tn_parameters(2), PipelineFailed);
}

TEST_CASE("construct_curve_point at x = 10^6") {
  const auto t = build_spf_table(2'000'000);
  const auto cert = construct_curve_point(1'000'000, 0.5L, t);
  CHECK(cert.parity_empty);
  CHECK(cert.J > 0);
  CHECK(cert.N == cert.offsets.size());
  CHECK(std::is_sorted(cert.offsets.begin(), cert.offsets.end()));
  if (!cert.offsets.empty()) {
    CHECK(cert.offsets.front() >= 1);
    CHECK(cert.offsets.back() < cert.J);
  }
  CHECK(cert.n > cert.interval.lo);
  CHECK(cert.n + cert.J <= cert.interval.hi);

  std::vector<std::uint64_t> members{cert.n, cert.n + cert.J};
  for (const auto o : cert.offsets) members.push_back(cert.n + o);
  CHECK(oracle::product_is_square(members));

  // Parity check is order independent.
  std::mt19937_64 rng(3);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(members.begin(), members.end(), rng);
    ParityVector acc;
    for (const auto m : members) acc ^= parity_vector(factorize(m, t));
    CHECK(acc.empty());
  }

  CHECK(cert.required_N >= 1);
  CHECK(cert.meets_exponent == (cert.N >= cert.required_N));

  const auto again = construct_curve_point(1'000'000, 0.5L, t);
  CHECK(again.n == cert.n);
  CHECK(again.J == cert.J);
  CHECK(again.offsets == cert.offsets);
}

TEST_CASE("construct_curve_point fails at small x") {
  const auto t = build_spf_table(10'000);
  CHECK_THROWS_AS(construct_curve_point(100, 0.5L, t), PipelineFailed);
  try {
    construct_curve_point(100, 0.5L, t);
  } catch (const PipelineFailed& e) {
    CHECK(e.stage() == "interval");
  }
}

TEST_CASE("small t_n pipeline") {
  const auto t = build_spf_table(2'000'000);
  const auto run = run_small_tn_pipeline(1'000'000, t, {}, 2);
  CHECK(!run.entries.empty());
  CHECK(run.successes > 0);
  for (const auto& e : run.entries) {
    if (!e.certificate) continue;
    CHECK(e.verified);
    CHECK(compute_tn(e.certificate->n, t).t <= run.parameters.L);
  }
}
