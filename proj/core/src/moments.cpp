#include "momtensor/moments.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>

#include "momtensor/error.hpp"
#include "momtensor/partitions.hpp"
#include "momtensor/tensor_ops.hpp"

namespace momtensor {

namespace {

// Samples are folded into fixed-size blocks whose partial sums are added to
// the running total, so the summation order depends only on the data.
constexpr std::size_t kBlock = 4096;

void require_kind(const SampleSet& samples, SampleKind kind, const char* what) {
  if (samples.kind() != kind) {
    throw ShapeError(std::string(what) + (kind == SampleKind::vector ? " needs vector samples" : " needs matrix samples"));
  }
}

void require_order(std::size_t k, const char* what) {
  if (k == 0) throw InvalidArgument(std::string(what) + " needs k >= 1");
}

// out <- y^k flattened row-major (length |y|^k).
void power_into(std::span<const double> y, std::size_t k, std::vector<double>& out, std::vector<double>& scratch) {
  const std::size_t w = y.size();
  out.assign(1, 1.0);
  for (std::size_t level = 0; level < k; ++level) {
    scratch.resize(out.size() * w);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double head = out[i];
      for (std::size_t j = 0; j < w; ++j) scratch[i * w + j] = head * y[j];
    }
    std::swap(out, scratch);
  }
}

// Visits (x_i - shift)^k for every sample i.
template <class Visit>
void for_each_power(const SampleSet& samples, std::span<const double> shift, std::size_t k, Visit&& visit) {
  const std::size_t w = samples.width();
  std::vector<double> y(w);
  std::vector<double> p;
  std::vector<double> scratch;
  for (std::size_t i = 0; i < samples.count(); ++i) {
    const auto x = samples.sample(i);
    for (std::size_t j = 0; j < w; ++j) y[j] = shift.empty() ? x[j] : x[j] - shift[j];
    power_into(y, k, p, scratch);
    visit(i, p);
  }
}

std::vector<double> power_mean(const SampleSet& samples, std::span<const double> shift, std::size_t k) {
  const std::size_t len = checked_entry_count(Extents(k, samples.width()));
  std::vector<double> total(len, 0.0);
  std::vector<double> block(len, 0.0);
  const std::size_t count = samples.count();
  for_each_power(samples, shift, k, [&](std::size_t i, const std::vector<double>& p) {
    for (std::size_t j = 0; j < len; ++j) block[j] += p[j];
    if ((i + 1) % kBlock == 0 || i + 1 == count) {
      for (std::size_t j = 0; j < len; ++j) total[j] += block[j];
      std::fill(block.begin(), block.end(), 0.0);
    }
  });
  for (double& v : total) v /= static_cast<double>(count);
  return total;
}

// Standard error of the mean of each power entry, second pass around `mean`.
std::vector<double> power_standard_error(const SampleSet& samples, std::span<const double> shift, std::size_t k,
                                         const std::vector<double>& mean) {
  const std::size_t count = samples.count();
  if (count < 2) throw InvalidArgument("standard errors need at least two samples");
  const std::size_t len = mean.size();
  std::vector<double> total(len, 0.0);
  std::vector<double> block(len, 0.0);
  for_each_power(samples, shift, k, [&](std::size_t i, const std::vector<double>& p) {
    for (std::size_t j = 0; j < len; ++j) {
      const double d = p[j] - mean[j];
      block[j] += d * d;
    }
    if ((i + 1) % kBlock == 0 || i + 1 == count) {
      for (std::size_t j = 0; j < len; ++j) total[j] += block[j];
      std::fill(block.begin(), block.end(), 0.0);
    }
  });
  const double n = static_cast<double>(count);
  for (double& v : total) v = std::sqrt(v / (n - 1.0) / n);
  return total;
}

// Reorders a flattened power of vec(X) (row-major, modes i1 j1 i2 j2 ...)
// into rows-first order (i1 .. ik, j1 .. jk).
Tensor rows_first(std::vector<double> flat, std::size_t rows, std::size_t cols, std::size_t k) {
  Extents interleaved;
  std::vector<std::size_t> perm;
  for (std::size_t i = 0; i < k; ++i) {
    interleaved.push_back(rows);
    interleaved.push_back(cols);
    perm.push_back(2 * i);
  }
  for (std::size_t i = 0; i < k; ++i) perm.push_back(2 * i + 1);
  return permute_modes(Tensor(std::move(interleaved), std::move(flat)), perm);
}

std::vector<double> flat_mean(const SampleSet& samples) { return power_mean(samples, {}, 1); }

}  // namespace

MomentSequence::MomentSequence(std::vector<Tensor> raw) : raw_(std::move(raw)) {
  if (raw_.empty()) throw ShapeError("moment sequence needs at least the mean");
  const std::size_t n = raw_.front().size();
  for (std::size_t j = 0; j < raw_.size(); ++j) {
    const Tensor& m = raw_[j];
    if (m.order() != j + 1 || !m.is_cubic() || m.dimension() != n) {
      throw ShapeError("moment sequence entry " + std::to_string(j + 1) + " must be cubic of order " +
                       std::to_string(j + 1) + " and dimension " + std::to_string(n));
    }
    if (!is_symmetric(m, 1e-10 * std::max(1.0, max_abs(m)))) {
      throw ShapeError("moment tensor of order " + std::to_string(j + 1) + " is not symmetric");
    }
  }
}

MomentSequence MomentSequence::from_samples(const SampleSet& samples, std::size_t max_order) {
  require_order(max_order, "MomentSequence::from_samples");
  std::vector<Tensor> raw;
  for (std::size_t k = 1; k <= max_order; ++k) raw.push_back(sample_raw_moment(samples, k));
  return MomentSequence(std::move(raw));
}

Tensor MomentSequence::raw(std::size_t k) const {
  if (k == 0) return Tensor::scalar(1.0);
  if (k > raw_.size()) {
    throw InvalidArgument("moment of order " + std::to_string(k) + " is missing (sequence stops at " +
                          std::to_string(raw_.size()) + ")");
  }
  return raw_[k - 1];
}

Tensor sample_mean(const SampleSet& samples) { return Tensor(samples.shape(), flat_mean(samples)); }

Tensor sample_raw_moment(const SampleSet& samples, std::size_t k) {
  require_kind(samples, SampleKind::vector, "sample_raw_moment");
  require_order(k, "sample_raw_moment");
  return Tensor(Extents(k, samples.width()), power_mean(samples, {}, k));
}

MomentEstimate sample_raw_moment_with_error(const SampleSet& samples, std::size_t k) {
  require_kind(samples, SampleKind::vector, "sample_raw_moment_with_error");
  require_order(k, "sample_raw_moment_with_error");
  auto mean = power_mean(samples, {}, k);
  auto se = power_standard_error(samples, {}, k, mean);
  const Extents ext(k, samples.width());
  return {Tensor(ext, std::move(mean)), Tensor(ext, std::move(se))};
}

Tensor sample_central_moment(const SampleSet& samples, std::size_t k) {
  require_kind(samples, SampleKind::vector, "sample_central_moment");
  require_order(k, "sample_central_moment");
  const auto center = flat_mean(samples);
  return Tensor(Extents(k, samples.width()), power_mean(samples, center, k));
}

Tensor central_from_raw(const MomentSequence& moments, std::size_t k) {
  if (k == 0) return Tensor::scalar(1.0);
  if (k > moments.max_order()) {
    throw InvalidArgument("central_from_raw: order " + std::to_string(k) + " needs raw moments up to " +
                          std::to_string(k) + ", sequence stops at " + std::to_string(moments.max_order()));
  }
  const Tensor& mu = moments.mean();
  Tensor result(Extents(k, moments.dimension()));
  Tensor mu_power = Tensor::scalar(1.0);
  for (std::size_t s = 0; s <= k; ++s) {
    if (s > 0) mu_power = outer_product(mu_power, mu);
    const Tensor lower = moments.raw(k - s);
    const double sign = s % 2 == 0 ? 1.0 : -1.0;
    for (const ModeSet& theta : mode_subsets(k, s)) {
      Tensor term = outer_product(lower, mu_power, theta);
      if (sign > 0) {
        result += term;
      } else {
        result -= term;
      }
    }
  }
  return result;
}

Tensor sample_matrix_raw_moment(const SampleSet& samples, std::size_t k) {
  require_kind(samples, SampleKind::matrix, "sample_matrix_raw_moment");
  require_order(k, "sample_matrix_raw_moment");
  return rows_first(power_mean(samples, {}, k), samples.shape()[0], samples.shape()[1], k);
}

Tensor sample_matrix_central_moment(const SampleSet& samples, std::size_t k) {
  require_kind(samples, SampleKind::matrix, "sample_matrix_central_moment");
  require_order(k, "sample_matrix_central_moment");
  const auto center = flat_mean(samples);
  return rows_first(power_mean(samples, center, k), samples.shape()[0], samples.shape()[1], k);
}

Tensor matrix_covariance_tensor(const SampleSet& samples) {
  require_kind(samples, SampleKind::matrix, "matrix_covariance_tensor");
  if (samples.count() < 2) throw InvalidArgument("matrix_covariance_tensor needs at least two samples");
  return sample_matrix_central_moment(samples, 2);
}

MomentEstimate matrix_covariance_with_error(const SampleSet& samples) {
  require_kind(samples, SampleKind::matrix, "matrix_covariance_with_error");
  if (samples.count() < 2) throw InvalidArgument("matrix_covariance_with_error needs at least two samples");
  const auto center = flat_mean(samples);
  auto mean = power_mean(samples, center, 2);
  auto se = power_standard_error(samples, center, 2, mean);
  const std::size_t m = samples.shape()[0];
  const std::size_t n = samples.shape()[1];
  return {rows_first(std::move(mean), m, n, 2), rows_first(std::move(se), m, n, 2)};
}

}  // namespace momtensor
