#include <benchmark/benchmark.h>

#include "latticegan/data.hpp"
#include "latticegan/metrics.hpp"

using namespace latticegan;

static void BM_frechet_score(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  DataSpec spec;
  spec.source = GaussianMixtureSpec{ring_of_gaussians(8, 1.0), 0.05};
  Rng rng(1);
  const Matrix a = sample_real(spec, n, rng);
  const Matrix b = sample_real(spec, n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(frechet_score(a, b));
  }
}
BENCHMARK(BM_frechet_score)->Arg(512)->Arg(4096);

static void BM_mode_histogram(benchmark::State& state) {
  const Matrix centers = ring_of_gaussians(8, 1.0);
  DataSpec spec;
  spec.source = GaussianMixtureSpec{centers, 0.05};
  Rng rng(2);
  const Matrix samples = sample_real(spec, static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) {
    auto hist = mode_histogram(samples, centers, 0.15);
    benchmark::DoNotOptimize(hist.counts.data());
  }
}
BENCHMARK(BM_mode_histogram)->Arg(512)->Arg(4096);

static void BM_genome_l2_matrix(benchmark::State& state) {
  Rng rng(3);
  std::vector<std::vector<double>> genomes(static_cast<std::size_t>(state.range(0)),
                                           std::vector<double>(354));
  for (auto& g : genomes) {
    for (double& v : g) v = rng.uniform(-1.0, 1.0);
  }
  for (auto _ : state) {
    auto m = genome_l2_matrix(genomes);
    benchmark::DoNotOptimize(m.data.data());
  }
}
BENCHMARK(BM_genome_l2_matrix)->Arg(9)->Arg(25);
