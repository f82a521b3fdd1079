#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tnlab/arith.hpp"

namespace tnlab {

using Tag = std::uint64_t;
/// Sorted, duplicate-free list of tags. XOR of two tag sets is their
/// symmetric difference.
using TagSet = std::vector<Tag>;

TagSet symmetric_difference(const TagSet& a, const TagSet& b);

/// Exponent parities of an integer, indexed by prime.
///
/// The first 64 primes (2..311) live in one machine word; anything larger
/// is kept as an ascending list. Values are immutable in practice and
/// cheap to share.
class ParityVector {
 public:
  ParityVector() = default;
  /// Primes in any order; repeated primes cancel in pairs.
  static ParityVector from_primes(std::span<const std::uint64_t> primes);

  bool empty() const { return low_ == 0 && high_.empty(); }
  /// Largest prime in the support, or 0 for the zero vector.
  std::uint64_t pivot() const;
  bool contains(std::uint64_t p) const;
  std::size_t weight() const;
  std::vector<std::uint64_t> support() const;

  ParityVector& operator^=(const ParityVector& other);
  friend ParityVector operator^(ParityVector a, const ParityVector& b) { return a ^= b; }
  friend bool operator==(const ParityVector&, const ParityVector&) = default;

 private:
  std::uint64_t low_ = 0;
  std::vector<std::uint64_t> high_;
};

/// theta(n): odd-exponent primes of the factorization.
ParityVector parity_vector(const FactorizationRecord& f);

struct InsertOutcome {
  bool extended = false;
  /// Pivot prime of the new row when extended.
  std::uint64_t pivot = 0;
  /// When dependent: prior tags whose vectors XOR to the inserted vector.
  TagSet combination;
};

/// Incrementally built GF(2) row basis. Rows are keyed by their largest
/// prime; rows are never back-reduced, so a row's content is fixed once
/// stored. Single writer; concurrent readers only between mutations.
class EchelonBasis {
 public:
  struct Row {
    ParityVector vector;
    TagSet combination;
  };

  struct Reduction {
    ParityVector residual;
    TagSet combination;
  };

  /// Throws UsageError if the tag was inserted before.
  InsertOutcome insert(const ParityVector& v, Tag tag);
  /// Tags whose vectors XOR to v, or nullopt when v is outside the span.
  std::optional<TagSet> express(const ParityVector& v) const;
  /// Reduce v until its largest prime is not a pivot (or v vanishes).
  Reduction reduce(ParityVector v, TagSet combination = {}) const;

  const Row* row(std::uint64_t pivot) const;
  std::size_t rank() const { return rows_.size(); }
  std::size_t inserted() const { return tags_.size(); }
  const std::vector<Tag>& tags() const { return tags_; }

 private:
  std::unordered_map<std::uint64_t, Row> rows_;
  std::unordered_set<Tag> seen_;
  std::vector<Tag> tags_;
};

InsertOutcome basis_insert(EchelonBasis& basis, const ParityVector& v, Tag tag);
std::optional<TagSet> express_in_span(const EchelonBasis& basis, const ParityVector& v);

struct TaggedVector {
  Tag tag;
  ParityVector vector;
};

/// Kernel basis of the tagged family: M - r tag sets, each XOR-ing to zero.
/// Set k contains the tag of the k-th dependent vector (in input order) plus
/// earlier tags only, so the sets are independent.
std::vector<TagSet> nullspace_subsets(std::span<const TaggedVector> vectors);

}  // namespace tnlab
