#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "momtensor/tensor.hpp"

namespace momtensor {

/// f : R^n -> R, evaluated on order-1 tensors of length `dimension`.
struct ScalarField {
  std::function<double(const Tensor&)> evaluator;
  std::size_t dimension = 0;
};

/// Y : R^{m x n} -> R^{m x n}, evaluated on m x n matrices.
struct MatrixField {
  std::function<Tensor(const Tensor&)> evaluator;
  std::size_t rows = 0;
  std::size_t cols = 0;
};

inline constexpr std::size_t kMaxHessianOrder = 4;

struct HessianOptions {
  /// Step size; defaults to eps^(1/(k+2)) * (1 + max|x0|).
  std::optional<double> step;
  /// Average the estimate over index permutations.
  bool symmetrize = true;
};

/// Central-difference estimate of the order-k derivative tensor of f at x0:
/// entry (i1..ik) ~ d^k f / dx_{i1} ... dx_{ik}, from the stencil
/// sum over e in {-1,1}^k of (prod e) f(x0 + h sum_l e_l u_{il}) / (2h)^k.
/// k must lie in 1..4.
Tensor hessian_tensor(const ScalarField& f, const Tensor& x0, std::size_t k, const HessianOptions& options = {});

/// Central-difference derivative of a matrix function, as an
/// m x m x n x n tensor: entry (i1,i2,j1,j2) ~ d y_{i1 j1} / d x_{i2 j2}.
/// Default step eps^(1/3) * (1 + max|X0|).
Tensor matrix_derivative_tensor(const MatrixField& y, const Tensor& x0, std::optional<double> step = {});

}  // namespace momtensor
