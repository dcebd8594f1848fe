#pragma once

#include <cstddef>
#include <vector>

#include "momtensor/samples.hpp"
#include "momtensor/tensor.hpp"

namespace momtensor {

/// Raw moment tensors m_1..m_K of one random vector. m_1 is the mean;
/// central moments are always derived, never stored.
class MomentSequence {
 public:
  /// raw[j] must be the cubic order-(j+1) moment over a common dimension,
  /// symmetric to 1e-10 relative to its largest entry.
  explicit MomentSequence(std::vector<Tensor> raw);

  /// Sample raw moments of orders 1..max_order (divisor N).
  static MomentSequence from_samples(const SampleSet& samples, std::size_t max_order);

  std::size_t max_order() const { return raw_.size(); }
  std::size_t dimension() const { return raw_.front().size(); }
  const Tensor& mean() const { return raw_.front(); }
  /// Raw moment of order k; order 0 is the scalar 1.
  Tensor raw(std::size_t k) const;

 private:
  std::vector<Tensor> raw_;
};

/// Moment estimate with per-entry standard error of the mean, where the
/// standard error uses the sample standard deviation (divisor N - 1).
struct MomentEstimate {
  Tensor value;
  Tensor standard_error;
};

/// Sample mean; order 1 for vector samples, order 2 for matrix samples.
Tensor sample_mean(const SampleSet& samples);

/// (1/N) sum_i x_i^k over vector samples.
Tensor sample_raw_moment(const SampleSet& samples, std::size_t k);
/// As sample_raw_moment, plus the standard error of every entry.
/// Needs at least two samples.
MomentEstimate sample_raw_moment_with_error(const SampleSet& samples, std::size_t k);

/// (1/N) sum_i (x_i - xbar)^k over vector samples.
Tensor sample_central_moment(const SampleSet& samples, std::size_t k);

/// Central moment from raw moments and the mean:
/// sum_{s=0..k} (-1)^s sum_{theta in s-subsets of k modes} m_{k-s} x_theta mu^s,
/// where mu^s occupies the modes theta.
Tensor central_from_raw(const MomentSequence& moments, std::size_t k);

/// (1/N) sum_i X_i^k over matrix samples, order 2k with all row modes first.
Tensor sample_matrix_raw_moment(const SampleSet& samples, std::size_t k);
/// Central counterpart of sample_matrix_raw_moment.
Tensor sample_matrix_central_moment(const SampleSet& samples, std::size_t k);

/// m x m x n x n covariance tensor of matrix samples:
/// C(i1,i2,j1,j2) = Cov(x_{i1 j1}, x_{i2 j2}), divisor N. Needs N >= 2.
Tensor matrix_covariance_tensor(const SampleSet& samples);
MomentEstimate matrix_covariance_with_error(const SampleSet& samples);

}  // namespace momtensor
