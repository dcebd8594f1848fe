#include "momtensor/tensor.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <utility>

#include "momtensor/error.hpp"

namespace momtensor {

namespace {

std::uint64_t read_entry_limit() {
  const char* env = std::getenv("MOMENT_TENSORS_MAX_ENTRIES");
  if (env == nullptr || *env == '\0') return kDefaultMaxEntries;
  char* end = nullptr;
  errno = 0;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (errno != 0 || end == env || *end != '\0' || value == 0) return kDefaultMaxEntries;
  return std::min<std::uint64_t>(value, kDefaultMaxEntries);
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.extents() != b.extents()) {
    throw ShapeError(std::string(what) + ": extents differ");
  }
}

}  // namespace

std::uint64_t entry_limit() {
  static const std::uint64_t limit = read_entry_limit();
  return limit;
}

std::size_t checked_entry_count(std::span<const std::size_t> extents) {
  const std::uint64_t limit = entry_limit();
  std::uint64_t count = 1;
  for (std::size_t e : extents) {
    if (e == 0) throw ShapeError("tensor extents must be positive");
    if (count > limit / e) {
      throw GuardError("tensor would exceed the entry limit of " + std::to_string(limit) +
                       " entries (MOMENT_TENSORS_MAX_ENTRIES may only lower it)");
    }
    count *= e;
  }
  return static_cast<std::size_t>(count);
}

Tensor::Tensor() : data_(1, 0.0) {}

Tensor::Tensor(Extents extents)
    : extents_(std::move(extents)), data_(checked_entry_count(extents_), 0.0) {}

Tensor::Tensor(Extents extents, std::vector<double> data) : extents_(std::move(extents)) {
  const std::size_t count = checked_entry_count(extents_);
  if (data.size() != count) {
    throw ShapeError("tensor data holds " + std::to_string(data.size()) + " entries, extents require " +
                     std::to_string(count));
  }
  data_ = std::move(data);
}

Tensor Tensor::scalar(double value) { return Tensor({}, {value}); }

Tensor Tensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("matrix rows have unequal length");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor({r, c}, std::move(data));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> data) {
  return Tensor({rows, cols}, std::move(data));
}

Tensor Tensor::identity(std::size_t n) {
  Tensor eye({n, n});
  for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1.0;
  return eye;
}

Tensor Tensor::filled(Extents extents, double value) {
  Tensor t(std::move(extents));
  std::fill(t.data_.begin(), t.data_.end(), value);
  return t;
}

bool Tensor::is_cubic() const {
  return std::adjacent_find(extents_.begin(), extents_.end(), std::not_equal_to<>()) == extents_.end();
}

std::size_t Tensor::dimension() const {
  if (!is_cubic()) throw ShapeError("tensor is not cubic");
  return extents_.empty() ? 1 : extents_.front();
}

std::size_t Tensor::offset(std::span<const std::size_t> index) const {
  if (index.size() != extents_.size()) {
    throw ShapeError("multi-index has " + std::to_string(index.size()) + " components, tensor order is " +
                     std::to_string(extents_.size()));
  }
  std::size_t off = 0;
  for (std::size_t j = 0; j < index.size(); ++j) {
    if (index[j] >= extents_[j]) throw ShapeError("multi-index component out of range");
    off = off * extents_[j] + index[j];
  }
  return off;
}

MultiIndex Tensor::unravel(std::size_t off) const {
  if (off >= data_.size()) throw ShapeError("offset out of range");
  MultiIndex index(extents_.size());
  for (std::size_t j = extents_.size(); j-- > 0;) {
    index[j] = off % extents_[j];
    off /= extents_[j];
  }
  return index;
}

double Tensor::at(std::initializer_list<std::size_t> index) const {
  return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
}

double& Tensor::at(std::initializer_list<std::size_t> index) {
  return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
}

double Tensor::operator()(std::size_t row, std::size_t col) const {
  const std::size_t idx[2] = {row, col};
  return data_[offset(idx)];
}

double& Tensor::operator()(std::size_t row, std::size_t col) {
  const std::size_t idx[2] = {row, col};
  return data_[offset(idx)];
}

Tensor& Tensor::operator+=(const Tensor& other) {
  require_same_shape(*this, other, "tensor addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& other) {
  require_same_shape(*this, other, "tensor subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Tensor& Tensor::operator*=(double factor) {
  for (double& v : data_) v *= factor;
  return *this;
}

bool operator==(const Tensor& lhs, const Tensor& rhs) {
  return lhs.extents_ == rhs.extents_ && lhs.data_ == rhs.data_;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) worst = std::max(worst, std::abs(da[i] - db[i]));
  return worst;
}

double max_abs(const Tensor& a) {
  double worst = 0.0;
  for (double v : a.data()) worst = std::max(worst, std::abs(v));
  return worst;
}

IndexCounter::IndexCounter(Extents extents) : extents_(std::move(extents)), index_(extents_.size(), 0) {
  for (std::size_t e : extents_) {
    if (e == 0) done_ = true;
  }
}

void IndexCounter::next() {
  for (std::size_t j = extents_.size(); j-- > 0;) {
    if (++index_[j] < extents_[j]) return;
    index_[j] = 0;
  }
  done_ = true;
}

ModeSet::ModeSet(std::vector<std::size_t> positions) : positions_(std::move(positions)) {
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    if (positions_[i] <= positions_[i - 1]) throw ShapeError("mode set must be strictly increasing");
  }
}

ModeSet::ModeSet(std::initializer_list<std::size_t> positions)
    : ModeSet(std::vector<std::size_t>(positions)) {}

ModeSet ModeSet::range(std::size_t count) {
  std::vector<std::size_t> all(count);
  for (std::size_t i = 0; i < count; ++i) all[i] = i;
  return ModeSet(std::move(all));
}

bool ModeSet::contains(std::size_t position) const {
  return std::binary_search(positions_.begin(), positions_.end(), position);
}

ModeSet ModeSet::complement(std::size_t total_order) const {
  check_within(total_order);
  std::vector<std::size_t> rest;
  rest.reserve(total_order - positions_.size());
  for (std::size_t p = 0; p < total_order; ++p) {
    if (!contains(p)) rest.push_back(p);
  }
  return ModeSet(std::move(rest));
}

void ModeSet::check_within(std::size_t total_order) const {
  if (!positions_.empty() && positions_.back() >= total_order) {
    throw ShapeError("mode position " + std::to_string(positions_.back()) + " outside order " +
                     std::to_string(total_order));
  }
}

}  // namespace momtensor
