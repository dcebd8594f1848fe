#pragma once

#include <cstddef>
#include <span>

#include "momtensor/tensor.hpp"

namespace momtensor {

/// Outer product along a mode set.
///
/// The result has order p + q. The modes listed in `b_modes` (size q)
/// carry B's indices in order; the complementary modes, ascending, carry
/// A's indices. An empty `b_modes` with scalar B returns A scaled by B, and
/// a scalar A with `b_modes` covering every mode returns B scaled by A.
Tensor outer_product(const Tensor& a, const Tensor& b, const ModeSet& b_modes);

/// Plain outer product; B occupies the trailing q modes.
Tensor outer_product(const Tensor& a, const Tensor& b);

/// k-fold outer power. Vectors give x_{i1}...x_{ik}; matrices give an order
/// 2k tensor with all row modes first:
/// entry (i1..ik, j1..jk) = X(i1,j1) * ... * X(ik,jk).
Tensor outer_power(const Tensor& x, std::size_t k);

/// Contraction of A's modes `a_modes` against B's modes `b_modes`, paired
/// positionally. Output modes are A's free modes followed by B's free modes.
Tensor einstein_product(const Tensor& a, const Tensor& b, const ModeSet& a_modes, const ModeSet& b_modes);

/// Right mode product: result(.., i, ..) = sum_j A(.., j, ..) * B(j, i).
/// `mode` is 0-based.
Tensor k_mode_right(const Tensor& a, const Tensor& b, std::size_t mode);

/// Left mode product: result(.., i, ..) = sum_j A(.., j, ..) * B(i, j).
Tensor k_mode_left(const Tensor& b, const Tensor& a, std::size_t mode);

/// Left mode product with B at every mode of a cubic A. B may be
/// rectangular (p x n), in which case the result has dimension p.
Tensor apply_all_modes(const Tensor& b, const Tensor& a);

/// C(i1,i2,i3,i4) = sum_{j1,j2} A(i1,i2,j1,j2) B(j1,j2,i3,i4).
Tensor tensor4_product(const Tensor& a, const Tensor& b);

/// eps(i1,i2,i3,i4) = delta(i1,i3) delta(i2,i4); the unit of tensor4_product.
Tensor identity_tensor4(std::size_t n);

/// Homogeneous polynomial A x^m of a cubic tensor.
double poly_eval(const Tensor& a, const Tensor& x);

/// y_i = sum over trailing m-1 indices of A(i, ...) x ... x.
Tensor contract_to_vector(const Tensor& a, const Tensor& x);

/// Whether every permutation orbit of entries spans at most `tol`.
bool is_symmetric(const Tensor& a, double tol);

/// Averages each entry over all permutations of its multi-index.
Tensor symmetrize(const Tensor& a);

/// Result mode j is input mode perm[j].
Tensor permute_modes(const Tensor& a, std::span<const std::size_t> perm);

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

}  // namespace momtensor
