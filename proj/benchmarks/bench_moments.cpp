#include <benchmark/benchmark.h>

#include "momtensor/gaussian.hpp"
#include "momtensor/moments.hpp"
#include "momtensor/partitions.hpp"
#include "momtensor/tensor_ops.hpp"

using namespace momtensor;

namespace {

void BM_SndMoment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(snd_moment(n, k));
}
BENCHMARK(BM_SndMoment)->Args({2, 4})->Args({3, 6})->Args({4, 8});

void BM_GaussianMoment(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const GaussianVectorParams params(Tensor::vector({1.0, -0.5, 0.25}),
                                    Tensor::matrix({{2, 1, 0}, {1, 2, 0.5}, {0, 0.5, 1}}));
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_moment(params, k));
}
BENCHMARK(BM_GaussianMoment)->DenseRange(2, 6, 2);

void BM_SampleRawMoment(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const GaussianVectorParams params(Tensor::vector({1.0, -0.5}), Tensor::matrix({{2, 1}, {1, 2}}));
  const SampleSet samples = sample_gaussian_vector(params, 100000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_raw_moment(samples, k));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(samples.count()));
}
BENCHMARK(BM_SampleRawMoment)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_TwoPartitions(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(two_partitions(k));
}
BENCHMARK(BM_TwoPartitions)->DenseRange(4, 12, 4);

void BM_Tensor4Product(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Tensor a = identity_tensor4(n) + Tensor::filled({n, n, n, n}, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(tensor4_product(a, a));
}
BENCHMARK(BM_Tensor4Product)->Arg(3)->Arg(6)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
