#include "momtensor/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "momtensor/error.hpp"
#include "momtensor/rng.hpp"
#include "momtensor/tensor_ops.hpp"

namespace momtensor {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowMatrix to_eigen(const Tensor& m) {
  return Eigen::Map<const RowMatrix>(m.data().data(), static_cast<Eigen::Index>(m.extent(0)),
                                     static_cast<Eigen::Index>(m.extent(1)));
}

Tensor from_eigen(const RowMatrix& m) {
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  return Tensor::matrix(rows, cols, std::vector<double>(m.data(), m.data() + m.size()));
}

void require_square(const Tensor& m, std::size_t n, const char* what) {
  if (m.order() != 2 || m.extent(0) != n || m.extent(1) != n) {
    throw ShapeError(std::string(what) + " must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
}

void require_symmetric(const Tensor& m, const char* what) {
  const std::size_t n = m.extent(0);
  const double scale = std::max(1.0, max_abs(m));
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw ParameterError(std::string(what) + " has a non-finite entry");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > kSymmetryTolerance * scale) {
        throw ParameterError(std::string(what) + " is not symmetric");
      }
    }
  }
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen_of(const Tensor& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Eigen::MatrixXd(to_eigen(m)));
}

void require_psd(const Tensor& m, double tolerance, const char* what) {
  const auto eig = eigen_of(m);
  const auto& values = eig.eigenvalues();
  const double scale = values.cwiseAbs().maxCoeff();
  if (values.minCoeff() < -tolerance * scale) {
    throw ParameterError(std::string(what) + " is not positive semidefinite (smallest eigenvalue " +
                         std::to_string(values.minCoeff()) + ")");
  }
}

void validate_covariance(const Tensor& m, std::size_t n, const char* what) {
  require_square(m, n, what);
  require_symmetric(m, what);
  require_psd(m, kPsdTolerance, what);
}

// Log-determinant and inverse of a positive definite matrix.
struct DefiniteFactor {
  double log_det = 0.0;
  Eigen::MatrixXd inverse;
};

DefiniteFactor factor_definite(const Tensor& m, const char* what) {
  const auto eig = eigen_of(m);
  const auto& values = eig.eigenvalues();
  if (values.minCoeff() <= kDefiniteFloor) {
    throw ParameterError(std::string(what) + " is singular; densities need a positive definite covariance");
  }
  DefiniteFactor f;
  f.log_det = values.array().log().sum();
  f.inverse = eig.eigenvectors() * values.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  return f;
}

void check_moment_order(std::size_t k) {
  if (k > kMaxMomentOrder) {
    throw GuardError("moment order " + std::to_string(k) + " exceeds the limit k <= " +
                     std::to_string(kMaxMomentOrder));
  }
}

// Outer product of `factors` in order; result mode j then reads mode
// source[j] of that product.
Tensor arrange(const std::vector<const Tensor*>& factors, const std::vector<std::size_t>& source) {
  Tensor acc = Tensor::scalar(1.0);
  for (const Tensor* f : factors) acc = outer_product(acc, *f);
  return permute_modes(acc, source);
}

Tensor matrix_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw FormatError(std::string(what) + " must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) throw FormatError(std::string(what) + " must be a non-empty array of rows");
  std::vector<double> data;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw FormatError(std::string(what) + " has ragged rows");
    for (const auto& v : row) data.push_back(v.get<double>());
  }
  return Tensor::matrix(rows, cols, std::move(data));
}

Tensor vector_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw FormatError(std::string(what) + " must be a non-empty array");
  return Tensor::vector(j.get<std::vector<double>>());
}

}  // namespace

GaussianVectorParams::GaussianVectorParams(Tensor mean, Tensor covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  if (mean_.order() != 1) throw ShapeError("Gaussian mean must be a vector");
  for (double v : mean_.data()) {
    if (!std::isfinite(v)) throw ParameterError("Gaussian mean has a non-finite entry");
  }
  validate_covariance(covariance_, mean_.size(), "covariance");
}

GaussianMatrixParams::GaussianMatrixParams(Tensor mean, Tensor row_covariance, Tensor col_covariance)
    : mean_(std::move(mean)), row_cov_(std::move(row_covariance)), col_cov_(std::move(col_covariance)) {
  if (mean_.order() != 2) throw ShapeError("Gaussian matrix mean must be a matrix");
  for (double v : mean_.data()) {
    if (!std::isfinite(v)) throw ParameterError("Gaussian mean has a non-finite entry");
  }
  validate_covariance(row_cov_, mean_.extent(0), "row covariance");
  validate_covariance(col_cov_, mean_.extent(1), "column covariance");
}

GaussianParams gaussian_params_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("params JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("mean")) throw FormatError("params JSON must be an object with \"mean\"");
    if (j.contains("cov")) {
      return GaussianVectorParams(vector_from_json(j.at("mean"), "mean"), matrix_from_json(j.at("cov"), "cov"));
    }
    if (j.contains("row_cov") && j.contains("col_cov")) {
      return GaussianMatrixParams(matrix_from_json(j.at("mean"), "mean"), matrix_from_json(j.at("row_cov"), "row_cov"),
                                  matrix_from_json(j.at("col_cov"), "col_cov"));
    }
    throw FormatError("params JSON needs \"cov\" or both \"row_cov\" and \"col_cov\"");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("params JSON: ") + e.what());
  } catch (const ShapeError& e) {
    throw FormatError(std::string("params JSON: ") + e.what());
  }
}

Tensor gamma_power(std::span<const Tensor> factors, const TwoPartition& gamma) {
  const auto& pairs = gamma.pairs();
  if (factors.size() != pairs.size()) {
    throw ShapeError("gamma_power: " + std::to_string(factors.size()) + " factors for " +
                     std::to_string(pairs.size()) + " pairs");
  }
  if (pairs.empty()) return Tensor::scalar(1.0);
  const std::size_t n = factors.front().order() == 2 ? factors.front().extent(0) : 0;
  for (const Tensor& f : factors) require_square(f, n, "gamma_power factor");
  checked_entry_count(Extents(gamma.order(), n));

  std::vector<const Tensor*> ptrs;
  std::vector<std::size_t> source(gamma.order());
  for (std::size_t l = 0; l < pairs.size(); ++l) {
    ptrs.push_back(&factors[l]);
    source[pairs[l].first] = 2 * l;
    source[pairs[l].second] = 2 * l + 1;
  }
  return arrange(ptrs, source);
}

Tensor gamma_power(const Tensor& factor, const TwoPartition& gamma) {
  std::vector<Tensor> factors(gamma.pairs().size(), factor);
  return gamma_power(factors, gamma);
}

Tensor gaussian_term(const Tensor& covariance, const Tensor& mean, const S2Partition& gamma) {
  if (mean.order() != 1) throw ShapeError("gaussian_term: mean must be a vector");
  const std::size_t n = mean.size();
  require_square(covariance, n, "gaussian_term covariance");
  checked_entry_count(Extents(gamma.order(), n));

  const auto& pairs = gamma.pairs();
  const auto& singles = gamma.singleton_block().positions();
  std::vector<const Tensor*> ptrs;
  std::vector<std::size_t> source(gamma.order());
  for (std::size_t l = 0; l < pairs.size(); ++l) {
    ptrs.push_back(&covariance);
    source[pairs[l].first] = 2 * l;
    source[pairs[l].second] = 2 * l + 1;
  }
  for (std::size_t w = 0; w < singles.size(); ++w) {
    ptrs.push_back(&mean);
    source[singles[w]] = 2 * pairs.size() + w;
  }
  return arrange(ptrs, source);
}

Tensor snd_moment(std::size_t n, std::size_t k) {
  if (n == 0) throw ShapeError("snd_moment needs n >= 1");
  check_moment_order(k);
  Tensor m(Extents(k, n));
  auto data = m.data();
  if (k == 0) {
    data[0] = 1.0;
    return m;
  }
  if (k % 2 != 0) return m;

  std::vector<std::size_t> stride(k, 1);
  for (std::size_t j = k - 1; j-- > 0;) stride[j] = stride[j + 1] * n;
  const std::size_t half = k / 2;

  // Each delta pattern is nonzero only where both ends of every pair agree;
  // walk those n^(k/2) positions directly.
  for (const TwoPartition& gamma : two_partitions(k)) {
    std::vector<std::size_t> step(half);
    for (std::size_t l = 0; l < half; ++l) step[l] = stride[gamma.pairs()[l].first] + stride[gamma.pairs()[l].second];
    std::vector<std::size_t> value(half, 0);
    std::size_t offset = 0;
    for (bool more = true; more;) {
      data[offset] += 1.0;
      more = false;
      for (std::size_t l = half; l-- > 0;) {
        offset += step[l];
        if (++value[l] < n) {
          more = true;
          break;
        }
        offset -= step[l] * n;
        value[l] = 0;
      }
    }
  }
  return m;
}

double snd_moment_entry(std::span<const std::size_t> sigma) {
  std::vector<std::size_t> sorted(sigma.begin(), sigma.end());
  std::sort(sorted.begin(), sorted.end());
  double value = 1.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const std::size_t r = j - i;
    if (r % 2 != 0) return 0.0;
    value *= static_cast<double>(double_factorial(static_cast<int>(r) - 1));
    i = j;
  }
  return value;
}

Tensor transformed_snd_moment(const Tensor& a, std::size_t k) {
  if (a.order() != 2) throw ShapeError("transformed_snd_moment: A must be a matrix");
  check_moment_order(k);
  const std::size_t m = a.extent(0);
  Tensor result(Extents(k, m));
  if (k == 0) {
    result.data()[0] = 1.0;
    return result;
  }
  if (k % 2 != 0) return result;
  const Tensor sigma = matmul(a, transpose(a));
  for (const TwoPartition& gamma : two_partitions(k)) result += gamma_power(sigma, gamma);
  return result;
}

Tensor gaussian_moment(const GaussianVectorParams& params, std::size_t k) {
  check_moment_order(k);
  const std::size_t n = params.dimension();
  Tensor result(Extents(k, n));
  for (std::size_t s = 0; 2 * s <= k; ++s) {
    for (const S2Partition& gamma : s2_partitions(k, s)) {
      result += gaussian_term(params.covariance(), params.mean(), gamma);
    }
  }
  return result;
}

Tensor sqrt_psd(const Tensor& s) {
  if (s.order() != 2 || s.extent(0) != s.extent(1)) throw ShapeError("sqrt_psd needs a square matrix");
  require_symmetric(s, "sqrt_psd input");
  const auto eig = eigen_of(s);
  const auto& values = eig.eigenvalues();
  const double scale = values.cwiseAbs().maxCoeff();
  if (values.minCoeff() < -kSqrtPsdTolerance * scale) {
    throw ParameterError("sqrt_psd: matrix is not positive semidefinite (smallest eigenvalue " +
                         std::to_string(values.minCoeff()) + ")");
  }
  const Eigen::VectorXd roots = values.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd root = eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
  const RowMatrix sym = 0.5 * (root + root.transpose());
  return from_eigen(sym);
}

SampleSet sample_gaussian_vector(const GaussianVectorParams& params, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw InvalidArgument("sample count must be >= 1");
  const std::size_t n = params.dimension();
  checked_entry_count(Extents{count, n});
  const Tensor root = sqrt_psd(params.covariance());
  const auto a = root.data();
  const auto mu = params.mean().data();

  NormalStream normals(seed);
  std::vector<double> u(n);
  std::vector<double> flat(count * n);
  for (std::size_t s = 0; s < count; ++s) {
    normals.fill(u);
    double* x = flat.data() + s * n;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += a[i * n + j] * u[j];
      x[i] = mu[i] + acc;
    }
  }
  return SampleSet::vectors(n, std::move(flat), seed);
}

SampleSet sample_gaussian_matrix(const GaussianMatrixParams& params, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw InvalidArgument("sample count must be >= 1");
  const std::size_t m = params.rows();
  const std::size_t n = params.cols();
  checked_entry_count(Extents{count, m, n});
  const Tensor row_root = sqrt_psd(params.row_covariance());
  const Tensor col_root = sqrt_psd(params.col_covariance());
  const auto a = row_root.data();
  const auto b = col_root.data();
  const auto mu = params.mean().data();

  NormalStream normals(seed);
  std::vector<double> u(m * n);
  std::vector<double> au(m * n);
  std::vector<double> flat(count * m * n);
  for (std::size_t s = 0; s < count; ++s) {
    normals.fill(u);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t l = 0; l < m; ++l) acc += a[i * m + l] * u[l * n + j];
        au[i * n + j] = acc;
      }
    }
    double* x = flat.data() + s * m * n;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t l = 0; l < n; ++l) acc += au[i * n + l] * b[j * n + l];
        x[i * n + j] = mu[i * n + j] + acc;
      }
    }
  }
  return SampleSet::matrices(m, n, std::move(flat), seed);
}

double gaussian_vector_density(const GaussianVectorParams& params, const Tensor& t) {
  const std::size_t n = params.dimension();
  if (t.order() != 1 || t.size() != n) throw ShapeError("density argument must be a vector of length " + std::to_string(n));
  const DefiniteFactor f = factor_definite(params.covariance(), "covariance");
  Eigen::VectorXd d(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) d[static_cast<Eigen::Index>(i)] = t.data()[i] - params.mean().data()[i];
  const double quad = d.dot(f.inverse * d);
  const double log_density =
      -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi) - 0.5 * f.log_det - 0.5 * quad;
  return std::exp(log_density);
}

double gaussian_matrix_density(const GaussianMatrixParams& params, const Tensor& t) {
  const std::size_t m = params.rows();
  const std::size_t n = params.cols();
  if (t.order() != 2 || t.extent(0) != m || t.extent(1) != n) throw ShapeError("density argument has the wrong shape");
  const DefiniteFactor rows = factor_definite(params.row_covariance(), "row covariance");
  const DefiniteFactor cols = factor_definite(params.col_covariance(), "column covariance");
  const Eigen::MatrixXd d = to_eigen(t) - to_eigen(params.mean());
  const double psi = -0.5 * (rows.inverse * d * cols.inverse * d.transpose()).trace();
  const double mn = static_cast<double>(m * n);
  const double log_density = -0.5 * mn * std::log(2.0 * std::numbers::pi) -
                             0.5 * static_cast<double>(n) * rows.log_det - 0.5 * static_cast<double>(m) * cols.log_det +
                             psi;
  return std::exp(log_density);
}

Tensor kronecker(const Tensor& a, const Tensor& b) {
  if (a.order() != 2 || b.order() != 2) throw ShapeError("kronecker needs two matrices");
  const std::size_t p = a.extent(0), q = a.extent(1), r = b.extent(0), s = b.extent(1);
  Tensor k({p * r, q * s});
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t u = 0; u < r; ++u)
        for (std::size_t v = 0; v < s; ++v) k(i * r + u, j * s + v) = a(i, j) * b(u, v);
  return k;
}

Tensor vec(const Tensor& m) {
  if (m.order() != 2) throw ShapeError("vec needs a matrix");
  const std::size_t rows = m.extent(0);
  const std::size_t cols = m.extent(1);
  std::vector<double> out(rows * cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) out[j * rows + i] = m(i, j);
  return Tensor::vector(std::move(out));
}

}  // namespace momtensor
