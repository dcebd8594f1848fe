#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "momtensor/tensor.hpp"

namespace momtensor {

enum class SampleKind { vector, matrix };

/// Non-empty collection of equally shaped real vectors or matrices, stored
/// back to back (matrices row-major). Non-finite entries are rejected.
class SampleSet {
 public:
  static SampleSet vectors(std::size_t n, std::vector<double> flat, std::optional<std::uint64_t> seed = {});
  static SampleSet matrices(std::size_t rows, std::size_t cols, std::vector<double> flat,
                            std::optional<std::uint64_t> seed = {});

  SampleKind kind() const { return kind_; }
  /// {n} for vectors, {m, n} for matrices.
  const Extents& shape() const { return shape_; }
  /// Entries per sample.
  std::size_t width() const { return width_; }
  std::size_t count() const { return flat_.size() / width_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

  std::span<const double> sample(std::size_t i) const { return {flat_.data() + i * width_, width_}; }
  std::span<const double> flat() const { return flat_; }
  /// Sample i as an order-1 or order-2 tensor.
  Tensor sample_tensor(std::size_t i) const;

 private:
  SampleSet(SampleKind kind, Extents shape, std::vector<double> flat, std::optional<std::uint64_t> seed);

  SampleKind kind_;
  Extents shape_;
  std::size_t width_;
  std::vector<double> flat_;
  std::optional<std::uint64_t> seed_;
};

/// One sample per row with 17 significant digits after a header line
/// `# kind=vector n=N` or `# kind=matrix m=M n=N`, optionally followed by
/// ` seed=S`.
std::string samples_to_csv(const SampleSet& samples);
SampleSet samples_from_csv(std::string_view text);

}  // namespace momtensor
