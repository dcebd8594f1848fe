#pragma once

// Independent reference computations for the tests. Nothing here calls the
// partition enumerators or closed forms under test.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "momtensor/tensor.hpp"

namespace oracle {

/// Number of perfect matchings of {0..k-1}, by canonicalizing every
/// permutation into a sorted pair list and counting distinct results.
std::size_t matching_count_by_permutations(std::size_t k);

/// (j)!! by a plain loop, as a double.
double double_factorial(int j);

/// E[u_{s1} ... u_{sk}] for u ~ N(0, I) from occurrence counts.
double snd_entry(const std::vector<std::size_t>& sigma);

/// E[z^p] for z ~ N(0, 1) by composite Simpson quadrature on [-L, L].
double normal_moment_quadrature(int p);

/// E[x_{s1} ... x_{sk}] for x = mu + A u by expanding the product over
/// every choice of mean or noise term and using the scalar moments of u.
double gaussian_entry_by_expansion(const momtensor::Tensor& mu, const momtensor::Tensor& a,
                                   const std::vector<std::size_t>& sigma);

/// Whole tensor from gaussian_entry_by_expansion.
momtensor::Tensor gaussian_moment_by_expansion(const momtensor::Tensor& mu, const momtensor::Tensor& a, std::size_t k);

/// result(.., i, ..) = sum_j A(.., j, ..) * B(i, j), by explicit loops.
momtensor::Tensor left_mode_product(const momtensor::Tensor& b, const momtensor::Tensor& a, std::size_t mode);

/// Random matrix with entries uniform in [-1, 1].
momtensor::Tensor random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Random symmetric cubic tensor of order k.
momtensor::Tensor random_symmetric(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace oracle
