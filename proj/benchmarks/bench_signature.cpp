#include <benchmark/benchmark.h>

#include <random>

#include "siginv/lie.hpp"
#include "siginv/tensor_algebra.hpp"

using namespace siginv;

namespace {

SampledPath random_walk(int dim, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.1);
  std::vector<double> t(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n) * dim, 0.0);
  for (int i = 0; i < n; ++i) {
    t[i] = i;
    for (int c = 0; c < dim && i > 0; ++c) v[i * dim + c] = v[(i - 1) * dim + c] + g(rng);
  }
  return SampledPath(t, v, dim);
}

void BM_Signature(benchmark::State& state) {
  const auto p = random_walk(static_cast<int>(state.range(0)), 1000, 1);
  const int depth = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(signature(p, depth));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.size()));
}
BENCHMARK(BM_Signature)->Args({2, 4})->Args({2, 6})->Args({4, 4})->Args({4, 6});

void BM_LogSignature(benchmark::State& state) {
  const auto p = random_walk(static_cast<int>(state.range(0)), 1000, 2);
  const int depth = static_cast<int>(state.range(1));
  LyndonBasis::get(p.dim(), depth);
  for (auto _ : state) benchmark::DoNotOptimize(log_signature(p, depth));
}
BENCHMARK(BM_LogSignature)->Args({2, 4})->Args({4, 4})->Args({4, 6});

void BM_TensorExpLog(benchmark::State& state) {
  const auto s = signature(random_walk(4, 50, 3), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tensor_exp(tensor_log(s)));
}
BENCHMARK(BM_TensorExpLog)->Arg(4)->Arg(6);

}  // namespace
