#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "siginv/inversion.hpp"

using namespace siginv;

namespace {

SampledPath smooth(std::size_t n, double a, double b) {
  std::vector<double> t(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    v[i] = std::sin(t[i]) + 0.3 * std::cos(3 * t[i]);
  }
  return SampledPath::univariate(t, v);
}

void BM_InvertFourier(benchmark::State& state) {
  const auto x = smooth(static_cast<std::size_t>(state.range(0)), 0, 2 * std::numbers::pi);
  const int order = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(invert_fourier(x, order, false));
}
BENCHMARK(BM_InvertFourier)->Args({1000, 3})->Args({10000, 3})->Args({1000, 6});

void BM_InvertLegendre(benchmark::State& state) {
  const auto x = smooth(static_cast<std::size_t>(state.range(0)), -1, 1);
  const auto fam = make_family(OrthoKind::legendre);
  for (auto _ : state) benchmark::DoNotOptimize(invert_ortho(x, fam, static_cast<int>(state.range(1))));
}
BENCHMARK(BM_InvertLegendre)->Args({1000, 4})->Args({10000, 4})->Args({1000, 8});

void BM_HermitePointwise(benchmark::State& state) {
  const auto x = smooth(200, 0, 1);
  OrthoParams p;
  p.eps = 0.05;
  const auto fam = make_family(OrthoKind::hermite_shift_scale, p);
  for (auto _ : state) benchmark::DoNotOptimize(invert_ortho(x, fam, 2));
}
BENCHMARK(BM_HermitePointwise);

void BM_FourierFunctionals(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fourier_functionals(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FourierFunctionals)->Arg(2)->Arg(4)->Arg(6);

}  // namespace
