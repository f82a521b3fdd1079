#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "tnlab/errors.hpp"
#include "tnlab/interval_lab.hpp"

using namespace tnlab;

using Subsets = std::vector<std::vector<std::uint64_t>>;

TEST_CASE("count_B examples") {
  const auto t = build_spf_table(10'000);
  CHECK(count_B(2, 6, t) == 1);
  CHECK(count_B(1, 6, t) == 2);
  CHECK(count_B(4, 5, t) == 0);
  CHECK_THROWS_AS(count_B(5, 5, t), RangeError);
}

TEST_CASE("enumerate_square_subsets examples") {
  const auto t = build_spf_table(10'000);
  const auto a = enumerate_square_subsets(2, 6, SubsetMode::brute, t);
  CHECK(a.subsets == Subsets{{}, {4}});
  CHECK(a.count == 2);

  const auto b = enumerate_square_subsets(1, 6, SubsetMode::brute, t);
  CHECK(b.subsets == Subsets{{}, {2, 3, 4, 6}, {2, 3, 6}, {4}});
  CHECK(b.count == 4);

  const auto c = enumerate_square_subsets(13, 14, SubsetMode::brute, t);
  CHECK(c.subsets == Subsets{{}});
  CHECK(c.count == 1);

  CHECK_THROWS_AS(enumerate_square_subsets(0, 31, SubsetMode::brute, t), RangeError);
  CHECK(enumerate_square_subsets(0, 31, SubsetMode::kernel, t).count > 1);
}

TEST_CASE("brute subsets match a product-square oracle") {
  const auto t = build_spf_table(10'000);
  for (std::uint64_t lo : {0, 20, 97, 400}) {
    const auto got = enumerate_square_subsets(lo, lo + 12, SubsetMode::brute, t);
    Subsets expect;
    for (std::uint64_t m = 0; m < (1u << 12); ++m) {
      std::vector<std::uint64_t> s;
      for (int b = 0; b < 12; ++b)
        if (m >> b & 1) s.push_back(lo + 1 + b);
      if (oracle::product_is_square(s)) expect.push_back(s);
    }
    std::sort(expect.begin(), expect.end());
    CHECK(got.subsets == expect);
  }
}

TEST_CASE("check_interval_identity examples") {
  const auto t = build_spf_table(10'000);
  const auto a = check_interval_identity(2, 6, 5, SubsetMode::brute, t);
  CHECK(a.B == 1);
  CHECK(a.square_subset_count == 2);
  CHECK(a.ok());

  const auto b = check_interval_identity(1, 6, 3, SubsetMode::brute, t);
  CHECK(b.B == 2);
  CHECK(b.square_subset_count == 4);
  CHECK(b.smooth_count == 4);
  CHECK(b.pi_y == 2);
  CHECK(b.ok());

  const auto c = check_interval_identity(13, 14, 3, SubsetMode::brute, t);
  CHECK(c.B == 0);
  CHECK(c.square_subset_count == 1);
  CHECK(c.ok());
}

TEST_CASE("property: 2^B identity, kernel/brute agreement, closure under XOR") {
  const auto t = build_spf_table(10'000);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t lo = rng() % 500;
    const std::uint64_t len = 1 + rng() % 18;
    const std::uint64_t y = 1 + rng() % 18;
    const auto report = check_interval_identity(lo, lo + len, y, SubsetMode::brute, t);
    REQUIRE(report.ok());
    const auto kernel = enumerate_square_subsets(lo, lo + len, SubsetMode::kernel, t);
    REQUIRE(kernel.count == report.square_subset_count);

    const auto brute = enumerate_square_subsets(lo, lo + len, SubsetMode::brute, t);
    const std::set<std::vector<std::uint64_t>> all(brute.subsets.begin(), brute.subsets.end());
    for (const auto& a : brute.subsets)
      for (const auto& b : brute.subsets) {
        std::vector<std::uint64_t> x;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(x));
        REQUIRE(all.count(x) == 1);
      }
  }
}
