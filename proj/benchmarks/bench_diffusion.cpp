#include <benchmark/benchmark.h>

#include "siginv/diffusion.hpp"
#include "siginv/eval.hpp"

using namespace siginv;

namespace {

void BM_DsmStep(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const std::size_t batch = 128;
  ScoreNet net(ScoreNetShape{width, 16, static_cast<int>(state.range(1)), 2});
  Rng rng(1);
  net.initialize(rng);
  std::normal_distribution<double> g;
  std::vector<double> data(batch * static_cast<std::size_t>(width));
  for (double& x : data) x = g(rng);
  const NoiseSchedule sched;
  for (auto _ : state) benchmark::DoNotOptimize(dsm_loss_and_grads(net, data, batch, sched, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(batch));
}
BENCHMARK(BM_DsmStep)->Args({10, 64})->Args({10, 256});

void BM_ProbabilityFlow(benchmark::State& state) {
  ScoreNet net(ScoreNetShape{10, 16, 64, 2});
  Rng rng(2);
  net.initialize(rng);
  const ScoreFn score = [&](double t, std::span<const double> x, std::span<double> out) {
    net.predict(t, x, out);
  };
  for (auto _ : state) benchmark::DoNotOptimize(sample_probability_flow(score, 10, 64, NoiseSchedule{}, rng));
}
BENCHMARK(BM_ProbabilityFlow);

void BM_KsTwoSample(benchmark::State& state) {
  Rng rng(3);
  std::normal_distribution<double> g;
  std::vector<double> a(static_cast<std::size_t>(state.range(0))), b(a.size());
  for (double& x : a) x = g(rng);
  for (double& x : b) x = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(ks_two_sample(a, b));
}
BENCHMARK(BM_KsTwoSample)->Arg(64)->Arg(10000);

}  // namespace
