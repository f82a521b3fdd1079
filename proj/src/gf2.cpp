#include "tnlab/gf2.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <string>

#include "tnlab/errors.hpp"

namespace tnlab {

namespace {

constexpr std::array<std::uint16_t, 64> kLowPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
    59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
    137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};

constexpr std::uint64_t kLowLimit = 311;

constexpr auto kLowIndex = [] {
  std::array<std::int8_t, kLowLimit + 1> idx{};
  idx.fill(-1);
  for (std::size_t i = 0; i < kLowPrimes.size(); ++i) idx[kLowPrimes[i]] = static_cast<std::int8_t>(i);
  return idx;
}();

}  // namespace

TagSet symmetric_difference(const TagSet& a, const TagSet& b) {
  TagSet out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ParityVector ParityVector::from_primes(std::span<const std::uint64_t> primes) {
  ParityVector v;
  std::vector<std::uint64_t> high;
  for (const auto p : primes) {
    if (p <= kLowLimit && kLowIndex[p] >= 0) {
      v.low_ ^= std::uint64_t{1} << kLowIndex[p];
    } else if (p > kLowLimit) {
      high.push_back(p);
    } else {
      throw DomainError("parity vector index " + std::to_string(p) + " is not prime");
    }
  }
  std::sort(high.begin(), high.end());
  // Cancel repeated primes pairwise.
  for (std::size_t i = 0; i < high.size();) {
    std::size_t j = i;
    while (j < high.size() && high[j] == high[i]) ++j;
    if ((j - i) % 2 == 1) v.high_.push_back(high[i]);
    i = j;
  }
  return v;
}

std::uint64_t ParityVector::pivot() const {
  if (!high_.empty()) return high_.back();
  if (low_ == 0) return 0;
  return kLowPrimes[63 - std::countl_zero(low_)];
}

bool ParityVector::contains(std::uint64_t p) const {
  if (p <= kLowLimit) return kLowIndex[p] >= 0 && ((low_ >> kLowIndex[p]) & 1U);
  return std::binary_search(high_.begin(), high_.end(), p);
}

std::size_t ParityVector::weight() const {
  return static_cast<std::size_t>(std::popcount(low_)) + high_.size();
}

std::vector<std::uint64_t> ParityVector::support() const {
  std::vector<std::uint64_t> out;
  out.reserve(weight());
  for (std::uint64_t bits = low_; bits != 0; bits &= bits - 1)
    out.push_back(kLowPrimes[std::countr_zero(bits)]);
  out.insert(out.end(), high_.begin(), high_.end());
  return out;
}

ParityVector& ParityVector::operator^=(const ParityVector& other) {
  low_ ^= other.low_;
  if (other.high_.empty()) return *this;
  if (high_.empty()) {
    high_ = other.high_;
    return *this;
  }
  std::vector<std::uint64_t> merged;
  merged.reserve(high_.size() + other.high_.size());
  std::set_symmetric_difference(high_.begin(), high_.end(), other.high_.begin(),
                                other.high_.end(), std::back_inserter(merged));
  high_ = std::move(merged);
  return *this;
}

ParityVector parity_vector(const FactorizationRecord& f) {
  std::vector<std::uint64_t> odd;
  for (const auto& [p, e] : f.factors)
    if (e % 2 == 1) odd.push_back(p);
  return ParityVector::from_primes(odd);
}

EchelonBasis::Reduction EchelonBasis::reduce(ParityVector v, TagSet combination) const {
  while (!v.empty()) {
    const auto it = rows_.find(v.pivot());
    if (it == rows_.end()) break;
    v ^= it->second.vector;
    combination = symmetric_difference(combination, it->second.combination);
  }
  return {std::move(v), std::move(combination)};
}

InsertOutcome EchelonBasis::insert(const ParityVector& v, Tag tag) {
  if (!seen_.insert(tag).second) {
    throw UsageError("tag " + std::to_string(tag) + " inserted twice");
  }
  tags_.push_back(tag);
  auto [residual, combination] = reduce(v);
  if (residual.empty()) return {false, 0, std::move(combination)};
  // Row content = v XOR (rows used), so its combination gains the new tag.
  combination = symmetric_difference(combination, TagSet{tag});
  const std::uint64_t pivot = residual.pivot();
  rows_.emplace(pivot, Row{std::move(residual), std::move(combination)});
  return {true, pivot, {}};
}

std::optional<TagSet> EchelonBasis::express(const ParityVector& v) const {
  auto [residual, combination] = reduce(v);
  if (!residual.empty()) return std::nullopt;
  return combination;
}

const EchelonBasis::Row* EchelonBasis::row(std::uint64_t pivot) const {
  const auto it = rows_.find(pivot);
  return it == rows_.end() ? nullptr : &it->second;
}

InsertOutcome basis_insert(EchelonBasis& basis, const ParityVector& v, Tag tag) {
  return basis.insert(v, tag);
}

std::optional<TagSet> express_in_span(const EchelonBasis& basis, const ParityVector& v) {
  return basis.express(v);
}

std::vector<TagSet> nullspace_subsets(std::span<const TaggedVector> vectors) {
  EchelonBasis basis;
  std::vector<TagSet> kernel;
  for (const auto& [tag, vec] : vectors) {
    auto outcome = basis.insert(vec, tag);
    if (!outcome.extended) kernel.push_back(symmetric_difference(outcome.combination, TagSet{tag}));
  }
  return kernel;
}

}  // namespace tnlab
