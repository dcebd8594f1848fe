#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace momtensor {

using Extents = std::vector<std::size_t>;
using MultiIndex = std::vector<std::size_t>;

/// Hard ceiling on the number of entries of any tensor.
inline constexpr std::uint64_t kDefaultMaxEntries = 100'000'000;

/// Effective entry limit. Equals kDefaultMaxEntries unless the environment
/// variable MOMENT_TENSORS_MAX_ENTRIES holds a smaller positive integer; the
/// variable is read once per process and can only lower the limit.
std::uint64_t entry_limit();

/// Product of extents, throwing GuardError when it overflows or exceeds
/// entry_limit().
std::size_t checked_entry_count(std::span<const std::size_t> extents);

/// Dense real tensor of arbitrary order, stored row-major (last index
/// varies fastest). Order 0 is a scalar holding exactly one entry.
class Tensor {
 public:
  /// Scalar zero.
  Tensor();
  /// Zero-filled tensor with the given extents. Every extent must be >= 1.
  explicit Tensor(Extents extents);
  Tensor(Extents extents, std::vector<double> data);

  static Tensor scalar(double value);
  static Tensor vector(std::vector<double> values);
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  static Tensor identity(std::size_t n);
  static Tensor filled(Extents extents, double value);

  std::size_t order() const { return extents_.size(); }
  const Extents& extents() const { return extents_; }
  std::size_t extent(std::size_t mode) const { return extents_.at(mode); }
  std::size_t size() const { return data_.size(); }

  /// True when all modes share one extent (scalars count as cubic).
  bool is_cubic() const;
  /// Common extent of a cubic tensor; 1 for scalars.
  std::size_t dimension() const;

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  std::size_t offset(std::span<const std::size_t> index) const;
  MultiIndex unravel(std::size_t offset) const;

  double operator()(std::span<const std::size_t> index) const { return data_[offset(index)]; }
  double& operator()(std::span<const std::size_t> index) { return data_[offset(index)]; }
  double at(std::initializer_list<std::size_t> index) const;
  double& at(std::initializer_list<std::size_t> index);

  /// Matrix element access; requires order 2.
  double operator()(std::size_t row, std::size_t col) const;
  double& operator()(std::size_t row, std::size_t col);

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(double factor);

  friend Tensor operator+(Tensor lhs, const Tensor& rhs) { return lhs += rhs; }
  friend Tensor operator-(Tensor lhs, const Tensor& rhs) { return lhs -= rhs; }
  friend Tensor operator*(Tensor lhs, double factor) { return lhs *= factor; }
  friend Tensor operator*(double factor, Tensor rhs) { return rhs *= factor; }

  /// Exact equality of extents and every entry.
  friend bool operator==(const Tensor& lhs, const Tensor& rhs);

 private:
  Extents extents_;
  std::vector<double> data_;
};

/// Largest absolute entrywise difference; shapes must agree.
double max_abs_diff(const Tensor& a, const Tensor& b);
/// Largest absolute entry.
double max_abs(const Tensor& a);

/// Row-major odometer over all multi-indices of a shape.
class IndexCounter {
 public:
  explicit IndexCounter(Extents extents);

  const MultiIndex& index() const { return index_; }
  bool done() const { return done_; }
  /// Advances to the next multi-index in row-major order.
  void next();

 private:
  Extents extents_;
  MultiIndex index_;
  bool done_ = false;
};

/// Strictly increasing list of 0-based mode positions.
class ModeSet {
 public:
  ModeSet() = default;
  /// Throws ShapeError unless positions are strictly increasing.
  explicit ModeSet(std::vector<std::size_t> positions);
  ModeSet(std::initializer_list<std::size_t> positions);

  /// The full range {0, ..., count-1}.
  static ModeSet range(std::size_t count);

  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  const std::vector<std::size_t>& positions() const { return positions_; }
  std::size_t operator[](std::size_t i) const { return positions_[i]; }
  bool contains(std::size_t position) const;

  /// Remaining positions of {0, ..., total_order-1}, ascending.
  ModeSet complement(std::size_t total_order) const;
  /// Throws ShapeError if any position is >= total_order.
  void check_within(std::size_t total_order) const;

  friend bool operator==(const ModeSet&, const ModeSet&) = default;

 private:
  std::vector<std::size_t> positions_;
};

}  // namespace momtensor
