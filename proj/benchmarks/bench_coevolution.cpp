#include <benchmark/benchmark.h>

#include "latticegan/coevolution.hpp"
#include "latticegan/data.hpp"

using namespace latticegan;

namespace {

// The per-generation cost driver: sub-population size s. Ring r=1 gives
// s=3, ring r=2 and the grid give s=5.
Neighborhood make_neighborhood(std::size_t s) {
  Neighborhood n;
  for (std::size_t i = 0; i < s; ++i) {
    n.generators.push_back(make_genome(
        {{8, 32, Activation::Tanh}, {32, 2, Activation::Identity}}, 2 * i + 1, 2e-4));
    n.discriminators.push_back(make_genome(
        {{2, 32, Activation::Tanh}, {32, 1, Activation::Sigmoid}}, 2 * i + 2, 2e-4));
  }
  return n;
}

}  // namespace

static void BM_evaluate_all_pairs(benchmark::State& state) {
  const Neighborhood n = make_neighborhood(static_cast<std::size_t>(state.range(0)));
  DataSpec spec;
  spec.source = GaussianMixtureSpec{ring_of_gaussians(8, 1.0), 0.05};
  Rng rng(3);
  const Matrix real = sample_real(spec, 100, rng);
  const Matrix latent = sample_latent(LatentSpec{8}, 100, rng);
  for (auto _ : state) {
    auto f = evaluate_all_pairs(n, real, latent, LossConfig{});
    benchmark::DoNotOptimize(f.values.data());
  }
}
BENCHMARK(BM_evaluate_all_pairs)->Arg(3)->Arg(5);

static void BM_coev_generation(benchmark::State& state) {
  DataSpec spec;
  spec.source = GaussianMixtureSpec{ring_of_gaussians(8, 1.0), 0.05};
  Rng data_rng(4);
  const Matrix real = sample_real(spec, 100, data_rng);
  const Matrix latent = sample_latent(LatentSpec{8}, 100, data_rng);
  std::vector<Matrix> batches;
  for (int b = 0; b < 5; ++b) batches.push_back(sample_real(spec, 100, data_rng));

  for (auto _ : state) {
    state.PauseTiming();
    Neighborhood n = make_neighborhood(static_cast<std::size_t>(state.range(0)));
    Rng rng(5);
    state.ResumeTiming();
    coev_generation(n, batches, real, latent, CoevParams{2, 0.5, 1e-4, 1}, LossConfig{}, rng);
    benchmark::DoNotOptimize(n.generators.data());
  }
}
BENCHMARK(BM_coev_generation)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
