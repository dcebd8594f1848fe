#include "momtensor/partitions.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <utility>

#include "momtensor/error.hpp"

namespace momtensor {

namespace {

void check_pairs_normalized(const std::vector<Pair>& pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first >= pairs[i].second) throw ShapeError("pair must satisfy first < second");
    if (i > 0 && pairs[i].first <= pairs[i - 1].first) throw ShapeError("pairs must be sorted by first element");
  }
}

// Visits every matching of `elements` (ascending). The first free element
// is matched first, partners ascending.
void enumerate_matchings(std::vector<std::size_t>& free, std::vector<Pair>& current,
                         const std::function<void(const std::vector<Pair>&)>& emit) {
  if (free.empty()) {
    emit(current);
    return;
  }
  const std::size_t head = free.front();
  for (std::size_t i = 1; i < free.size(); ++i) {
    const std::size_t partner = free[i];
    std::vector<std::size_t> rest;
    rest.reserve(free.size() - 2);
    for (std::size_t j = 1; j < free.size(); ++j) {
      if (j != i) rest.push_back(free[j]);
    }
    current.push_back({head, partner});
    enumerate_matchings(rest, current, emit);
    current.pop_back();
  }
}

std::vector<std::vector<Pair>> matchings_of(std::vector<std::size_t> elements) {
  std::vector<std::vector<Pair>> out;
  std::vector<Pair> current;
  enumerate_matchings(elements, current, [&](const std::vector<Pair>& m) { out.push_back(m); });
  return out;
}

void append_pairs(std::string& out, const std::vector<Pair>& pairs) {
  out += '[';
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i > 0) out += ',';
    out += '[' + std::to_string(pairs[i].first + 1) + ',' + std::to_string(pairs[i].second + 1) + ']';
  }
  out += ']';
}

}  // namespace

TwoPartition::TwoPartition(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  check_pairs_normalized(pairs_);
  const std::size_t k = 2 * pairs_.size();
  std::vector<bool> seen(k, false);
  for (const Pair& p : pairs_) {
    if (p.second >= k || seen[p.first] || seen[p.second]) {
      throw ShapeError("pairs do not form a perfect matching of [" + std::to_string(k) + "]");
    }
    seen[p.first] = seen[p.second] = true;
  }
}

S2Partition::S2Partition(std::vector<Pair> pairs, ModeSet singletons, std::size_t order)
    : pairs_(std::move(pairs)), singletons_(std::move(singletons)), order_(order) {
  check_pairs_normalized(pairs_);
  singletons_.check_within(order_);
  if (2 * pairs_.size() + singletons_.size() != order_) throw ShapeError("blocks do not cover the ground set");
  std::vector<bool> seen(order_, false);
  for (std::size_t w : singletons_.positions()) seen[w] = true;
  for (const Pair& p : pairs_) {
    if (p.second >= order_ || seen[p.first] || seen[p.second]) {
      throw ShapeError("blocks of an [s,2]-partition must be disjoint");
    }
    seen[p.first] = seen[p.second] = true;
  }
}

std::vector<TwoPartition> two_partitions(std::size_t k) {
  if (k == 0 || k % 2 != 0) throw InvalidArgument("two_partitions needs an even k >= 2, got " + std::to_string(k));
  if (k > kMaxMatchingOrder) {
    throw GuardError("two_partitions: k = " + std::to_string(k) + " exceeds the enumeration limit k <= " +
                     std::to_string(kMaxMatchingOrder));
  }
  std::vector<std::size_t> all(k);
  for (std::size_t i = 0; i < k; ++i) all[i] = i;
  std::vector<TwoPartition> out;
  out.reserve(double_factorial(static_cast<int>(k) - 1));
  for (auto& m : matchings_of(std::move(all))) out.emplace_back(std::move(m));
  return out;
}

std::vector<S2Partition> s2_partitions(std::size_t k, std::size_t s) {
  if (2 * s > k) {
    throw InvalidArgument("s2_partitions needs 0 <= 2s <= k, got k = " + std::to_string(k) +
                          ", s = " + std::to_string(s));
  }
  std::uint64_t count = 0;
  const bool overflow = 2 * s > static_cast<std::size_t>(kMaxDoubleFactorial) + 1 ||
                        __builtin_mul_overflow(binomial(k, 2 * s), double_factorial(static_cast<int>(2 * s) - 1), &count);
  if (overflow || count > kMaxEnumeration) {
    throw GuardError("s2_partitions: k = " + std::to_string(k) + ", s = " + std::to_string(s) +
                     " exceeds the enumeration limit of " +
                     std::to_string(kMaxEnumeration));
  }
  std::vector<S2Partition> out;
  out.reserve(count);
  for (const ModeSet& w : mode_subsets(k, k - 2 * s)) {
    const ModeSet rest = w.complement(k);
    for (auto& m : matchings_of(rest.positions())) out.emplace_back(std::move(m), w, k);
  }
  return out;
}

std::uint64_t double_factorial(int j) {
  if (j < -1) throw InvalidArgument("double_factorial needs j >= -1, got " + std::to_string(j));
  if (j > kMaxDoubleFactorial) {
    throw GuardError("double_factorial: " + std::to_string(j) + "!! overflows 64 bits (limit " +
                     std::to_string(kMaxDoubleFactorial) + ")");
  }
  std::uint64_t result = 1;
  for (int f = j; f > 1; f -= 2) result *= static_cast<std::uint64_t>(f);
  return result;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    // result * (n - i) is divisible by i + 1; cancel the common part first.
    const std::uint64_t g = std::gcd(result, i + 1);
    const std::uint64_t factor = (n - i) / ((i + 1) / g);
    if (__builtin_mul_overflow(result / g, factor, &result)) {
      throw GuardError("binomial coefficient overflows 64 bits");
    }
  }
  return result;
}

std::vector<ModeSet> mode_subsets(std::size_t n, std::size_t s) {
  if (s > n) throw InvalidArgument("mode_subsets needs s <= n");
  if (binomial(n, s) > kMaxEnumeration) throw GuardError("mode_subsets: family exceeds the enumeration limit");
  std::vector<ModeSet> out;
  std::vector<std::size_t> pick(s);
  for (std::size_t i = 0; i < s; ++i) pick[i] = i;
  while (true) {
    out.emplace_back(pick);
    // advance to the next combination in lexicographic order
    std::size_t i = s;
    while (i > 0 && pick[i - 1] == n - s + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < s; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::string to_json(const TwoPartition& gamma) {
  std::string out;
  append_pairs(out, gamma.pairs());
  return out;
}

std::string to_json(const S2Partition& gamma) {
  std::string out = "{\"pairs\":";
  append_pairs(out, gamma.pairs());
  out += ",\"singletons\":[";
  const auto& w = gamma.singleton_block().positions();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(w[i] + 1);
  }
  out += "]}";
  return out;
}

}  // namespace momtensor
