#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "momtensor/tensor.hpp"

namespace momtensor {

/// Largest k accepted by two_partitions (15!! = 2,027,025 matchings).
inline constexpr std::size_t kMaxMatchingOrder = 16;
/// Largest enumeration any partition routine will materialize.
inline constexpr std::uint64_t kMaxEnumeration = 2'027'025;
/// Largest argument of double_factorial representable in 64 bits.
inline constexpr int kMaxDoubleFactorial = 33;

/// Unordered pair of 0-based positions, stored with first < second.
struct Pair {
  std::size_t first;
  std::size_t second;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

/// Perfect matching of {0, ..., k-1}: pairs with first < second, sorted by
/// first element.
class TwoPartition {
 public:
  /// Throws ShapeError unless the pairs are normalized and cover
  /// {0, ..., 2*pairs.size()-1} exactly once.
  explicit TwoPartition(std::vector<Pair> pairs);

  const std::vector<Pair>& pairs() const { return pairs_; }
  /// Size k of the ground set.
  std::size_t order() const { return 2 * pairs_.size(); }

  friend bool operator==(const TwoPartition&, const TwoPartition&) = default;

 private:
  std::vector<Pair> pairs_;
};

/// s disjoint pairs plus the leftover block W, together partitioning
/// {0, ..., k-1}. W may be empty.
class S2Partition {
 public:
  S2Partition(std::vector<Pair> pairs, ModeSet singletons, std::size_t order);

  const std::vector<Pair>& pairs() const { return pairs_; }
  const ModeSet& singleton_block() const { return singletons_; }
  std::size_t order() const { return order_; }

  friend bool operator==(const S2Partition&, const S2Partition&) = default;

 private:
  std::vector<Pair> pairs_;
  ModeSet singletons_;
  std::size_t order_;
};

/// All perfect matchings of {0, ..., k-1}. The smallest unmatched element
/// is paired first, with partners taken in ascending order.
std::vector<TwoPartition> two_partitions(std::size_t k);

/// Every W of size k-2s combined with every matching of the complement.
/// W runs over mode_subsets(k, k-2s) in lexicographic order.
std::vector<S2Partition> s2_partitions(std::size_t k, std::size_t s);

/// j!! with (-1)!! = 0!! = 1, exact for -1 <= j <= 33.
std::uint64_t double_factorial(int j);

/// Exact binomial coefficient; GuardError on 64-bit overflow.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// All strictly increasing s-subsets of {0, ..., n-1} in lexicographic
/// order. For s = 0 this is the family holding only the empty set.
std::vector<ModeSet> mode_subsets(std::size_t n, std::size_t s);

/// 1-based JSON rendering, e.g. `[[1,2],[3,4]]`.
std::string to_json(const TwoPartition& gamma);
/// 1-based JSON rendering: `{"pairs":[[2,3]],"singletons":[1]}`.
std::string to_json(const S2Partition& gamma);

}  // namespace momtensor
