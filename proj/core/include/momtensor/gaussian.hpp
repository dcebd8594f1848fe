#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>

#include "momtensor/partitions.hpp"
#include "momtensor/samples.hpp"
#include "momtensor/tensor.hpp"

namespace momtensor {

/// Largest moment order the closed forms accept.
inline constexpr std::size_t kMaxMomentOrder = 12;

/// Symmetry tolerance for covariances, relative to max(1, largest entry).
inline constexpr double kSymmetryTolerance = 1e-10;
/// Most negative eigenvalue a covariance may have, relative to its
/// largest eigenvalue magnitude; smaller negative parts are clamped.
inline constexpr double kPsdTolerance = 1e-10;
/// Same bound for a bare sqrt_psd call.
inline constexpr double kSqrtPsdTolerance = 1e-8;
/// Smallest eigenvalue accepted by the densities.
inline constexpr double kDefiniteFloor = 1e-12;

/// Mean and covariance of N(mu, Sigma). Validated on construction:
/// ShapeError for inconsistent sizes, ParameterError for an asymmetric or
/// indefinite covariance.
class GaussianVectorParams {
 public:
  GaussianVectorParams(Tensor mean, Tensor covariance);

  const Tensor& mean() const { return mean_; }
  const Tensor& covariance() const { return covariance_; }
  std::size_t dimension() const { return mean_.size(); }

 private:
  Tensor mean_;
  Tensor covariance_;
};

/// Parameters of the matrix normal N(mu, Sigma1, Sigma2) with row
/// covariance Sigma1 (m x m) and column covariance Sigma2 (n x n).
class GaussianMatrixParams {
 public:
  GaussianMatrixParams(Tensor mean, Tensor row_covariance, Tensor col_covariance);

  const Tensor& mean() const { return mean_; }
  const Tensor& row_covariance() const { return row_cov_; }
  const Tensor& col_covariance() const { return col_cov_; }
  std::size_t rows() const { return mean_.extent(0); }
  std::size_t cols() const { return mean_.extent(1); }

 private:
  Tensor mean_;
  Tensor row_cov_;
  Tensor col_cov_;
};

using GaussianParams = std::variant<GaussianVectorParams, GaussianMatrixParams>;

/// Parses `{"mean": [...], "cov": [[...]]}` or
/// `{"mean": [[...]], "row_cov": [[...]], "col_cov": [[...]]}`.
/// Structural problems raise FormatError; invalid covariances raise
/// ParameterError.
GaussianParams gaussian_params_from_json(std::string_view text);

/// Places factor l on the l-th pair (a, b) of gamma:
/// entry(sigma) = prod_l factors[l](sigma_a, sigma_b).
Tensor gamma_power(std::span<const Tensor> factors, const TwoPartition& gamma);
/// gamma_power with the same factor on every pair.
Tensor gamma_power(const Tensor& factor, const TwoPartition& gamma);

/// Term of the Gaussian moment expansion for one [s,2]-partition:
/// entry(sigma) = prod_{pairs (a,b)} cov(sigma_a, sigma_b) * prod_{w in W} mean(sigma_w).
Tensor gaussian_term(const Tensor& covariance, const Tensor& mean, const S2Partition& gamma);

/// Moment tensor E[u^k] of u ~ N(0, I_n) as the sum over perfect matchings
/// of Kronecker-delta patterns. Zero for odd k; scalar 1 for k = 0.
Tensor snd_moment(std::size_t n, std::size_t k);

/// Entrywise value of E[u_{i1} ... u_{ik}]: zero if some index occurs an
/// odd number of times, otherwise the product of (r - 1)!! over the
/// occurrence counts r.
double snd_moment_entry(std::span<const std::size_t> sigma);

/// E[(A u)^k] for u ~ N(0, I_n) and A (m x n): the sum over perfect
/// matchings of gamma_power(A A^T). Zero for odd k.
Tensor transformed_snd_moment(const Tensor& a, std::size_t k);

/// Raw moment tensor E[x^k] of x ~ N(mu, Sigma): the sum over all
/// [s,2]-partitions of gaussian_term.
Tensor gaussian_moment(const GaussianVectorParams& params, std::size_t k);

/// Symmetric square root by spectral decomposition. Eigenvalues down to
/// -1e-8 * ||S|| are clamped to zero; anything more negative, or an
/// asymmetric input, raises ParameterError.
Tensor sqrt_psd(const Tensor& s);

/// count draws of mu + A u with A = sqrt_psd(Sigma), u standard normal.
/// Deterministic for a fixed seed.
SampleSet sample_gaussian_vector(const GaussianVectorParams& params, std::size_t count, std::uint64_t seed);

/// count draws of mu + A U B^T with A = sqrt_psd(Sigma1), B = sqrt_psd(Sigma2)
/// and U a standard normal matrix filled row by row.
SampleSet sample_gaussian_matrix(const GaussianMatrixParams& params, std::size_t count, std::uint64_t seed);

/// Density of N(mu, Sigma) at t; ParameterError unless Sigma is positive
/// definite.
double gaussian_vector_density(const GaussianVectorParams& params, const Tensor& t);

/// Density of N(mu, Sigma1, Sigma2) at the matrix t.
double gaussian_matrix_density(const GaussianMatrixParams& params, const Tensor& t);

/// Kronecker product of two matrices.
Tensor kronecker(const Tensor& a, const Tensor& b);

/// Column-major vectorization of a matrix.
Tensor vec(const Tensor& m);

}  // namespace momtensor
