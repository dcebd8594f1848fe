#include "momtensor/derivatives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "momtensor/error.hpp"
#include "momtensor/tensor_ops.hpp"

namespace momtensor {

namespace {

double resolve_step(std::optional<double> step, double root, const Tensor& x0) {
  if (step) {
    if (!(*step > 0.0) || !std::isfinite(*step)) throw InvalidArgument("step must be positive and finite");
    return *step;
  }
  const double eps = std::numeric_limits<double>::epsilon();
  return std::pow(eps, 1.0 / root) * (1.0 + max_abs(x0));
}

double probe(const ScalarField& f, const Tensor& x) {
  const double v = f.evaluator(x);
  if (!std::isfinite(v)) throw InvalidArgument("scalar field returned a non-finite value");
  return v;
}

}  // namespace

Tensor hessian_tensor(const ScalarField& f, const Tensor& x0, std::size_t k, const HessianOptions& options) {
  if (k == 0 || k > kMaxHessianOrder) {
    throw InvalidArgument("hessian order must lie in 1.." + std::to_string(kMaxHessianOrder));
  }
  if (!f.evaluator) throw InvalidArgument("scalar field has no evaluator");
  if (x0.order() != 1 || x0.size() != f.dimension) {
    throw ShapeError("x0 must be a vector of length " + std::to_string(f.dimension));
  }
  const std::size_t n = f.dimension;
  const double h = resolve_step(options.step, static_cast<double>(k + 2), x0);
  const double scale = std::pow(2.0 * h, static_cast<double>(k));

  Tensor result(Extents(k, n));
  std::vector<int> shift(n);
  Tensor point = x0;
  for (IndexCounter idx(Extents(k, n)); !idx.done(); idx.next()) {
    const auto& sigma = idx.index();
    double sum = 0.0;
    for (std::size_t signs = 0; signs < (std::size_t{1} << k); ++signs) {
      std::fill(shift.begin(), shift.end(), 0);
      int parity = 1;
      for (std::size_t l = 0; l < k; ++l) {
        const int e = (signs >> l) & 1U ? -1 : 1;
        shift[sigma[l]] += e;
        parity *= e;
      }
      // Integer shifts keep the probe point independent of the index order.
      for (std::size_t j = 0; j < n; ++j) point.data()[j] = x0.data()[j] + h * shift[j];
      sum += parity * probe(f, point);
    }
    result(sigma) = sum / scale;
  }
  return options.symmetrize ? symmetrize(result) : result;
}

Tensor matrix_derivative_tensor(const MatrixField& y, const Tensor& x0, std::optional<double> step) {
  if (!y.evaluator) throw InvalidArgument("matrix field has no evaluator");
  if (x0.order() != 2 || x0.extent(0) != y.rows || x0.extent(1) != y.cols) {
    throw ShapeError("X0 must be a " + std::to_string(y.rows) + " x " + std::to_string(y.cols) + " matrix");
  }
  const std::size_t m = y.rows;
  const std::size_t n = y.cols;
  const double h = resolve_step(step, 3.0, x0);

  auto eval = [&](const Tensor& x) {
    Tensor v = y.evaluator(x);
    if (v.order() != 2 || v.extent(0) != m || v.extent(1) != n) {
      throw ShapeError("matrix field must return a " + std::to_string(m) + " x " + std::to_string(n) + " matrix");
    }
    for (double e : v.data()) {
      if (!std::isfinite(e)) throw InvalidArgument("matrix field returned a non-finite value");
    }
    return v;
  };

  Tensor result({m, m, n, n});
  Tensor point = x0;
  for (std::size_t i2 = 0; i2 < m; ++i2) {
    for (std::size_t j2 = 0; j2 < n; ++j2) {
      point(i2, j2) = x0(i2, j2) + h;
      const Tensor up = eval(point);
      point(i2, j2) = x0(i2, j2) - h;
      const Tensor down = eval(point);
      point(i2, j2) = x0(i2, j2);
      for (std::size_t i1 = 0; i1 < m; ++i1) {
        for (std::size_t j1 = 0; j1 < n; ++j1) {
          result.at({i1, i2, j1, j2}) = (up(i1, j1) - down(i1, j1)) / (2.0 * h);
        }
      }
    }
  }
  return result;
}

}  // namespace momtensor
