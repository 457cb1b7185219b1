#include <benchmark/benchmark.h>

#include "ruinlab/discrete.hpp"
#include "ruinlab/gou.hpp"

namespace {

using namespace ruinlab;

void BM_DiscretePath(benchmark::State& state) {
  const RescaledScheme scheme(StepLaw{NegPareto{3.0}}, StepLaw{Nig{2.0, 0.0, 1.0, 0.1}, LawRole::log_return},
                              static_cast<int>(state.range(0)));
  std::uint64_t id = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_path(scheme, 1.0, 1.0, {1, id++}).values.back());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DiscretePath)->Arg(32)->Arg(512);

void BM_ExactMoment(benchmark::State& state) {
  const RescaledScheme scheme(StepLaw{Normal{0.5, 1.0}}, StepLaw{Normal{0.1, 0.04}, LawRole::log_return}, 512);
  for (auto _ : state) benchmark::DoNotOptimize(exact_moment(scheme, 1.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ExactMoment)->Arg(1)->Arg(6);

void BM_GouPath(benchmark::State& state, GouScheme scheme) {
  GouParams p;
  p.mu_xi = 1.0;
  p.sigma_xi = 1.0;
  p.mu_rho = -0.05;
  p.sigma_rho = 0.3;
  std::uint64_t id = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_diffusion(p, 1.0, 1.0, 1e-3, scheme, {2, id++}).values.back());
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK_CAPTURE(BM_GouPath, euler_sde, GouScheme::euler_sde);
BENCHMARK_CAPTURE(BM_GouPath, exponential, GouScheme::exponential);

void BM_StablePath(benchmark::State& state) {
  GouParams p;
  p.mu_xi = -3.0;
  p.loss_driver = StableDriver{1.5, -1.0, 0.4};
  p.return_driver = StableDriver{1.5, 0.0, 1.0};
  std::uint64_t id = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_stable(p, 5.0, 1.0, 1e-3, {3, id++}).values.back());
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_StablePath);

}  // namespace
