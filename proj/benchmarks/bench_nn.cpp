#include <benchmark/benchmark.h>

#include "latticegan/nn.hpp"
#include "latticegan/rng.hpp"

using namespace latticegan;

static void BM_forward(benchmark::State& state) {
  const std::size_t hidden = static_cast<std::size_t>(state.range(0));
  const Network net = init_network(
      {{8, hidden, Activation::Tanh}, {hidden, 2, Activation::Identity}}, 1);
  std::vector<double> input = {0.1, -0.2, 0.3, -0.4, 0.5, -0.6, 0.7, -0.8};
  for (auto _ : state) {
    auto out = forward(net, input);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_forward)->Arg(32)->Arg(128)->Arg(256);

static void BM_backward(benchmark::State& state) {
  const std::size_t hidden = static_cast<std::size_t>(state.range(0));
  const Network net = init_network(
      {{8, hidden, Activation::Tanh}, {hidden, 2, Activation::Identity}}, 1);
  std::vector<double> input = {0.1, -0.2, 0.3, -0.4, 0.5, -0.6, 0.7, -0.8};
  std::vector<double> out_grad = {1.0, -1.0};
  for (auto _ : state) {
    auto grads = backward(net, input, out_grad);
    benchmark::DoNotOptimize(grads);
  }
}
BENCHMARK(BM_backward)->Arg(32)->Arg(128)->Arg(256);

static void BM_adam_step(benchmark::State& state) {
  Network net = init_network({{8, 32, Activation::Tanh}, {32, 2, Activation::Identity}}, 1);
  AdamState adam = make_adam_state(net.params.size());
  std::vector<double> grads(net.params.size(), 1e-3);
  for (auto _ : state) {
    adam_step(net, grads, adam, 2e-4);
    benchmark::DoNotOptimize(net.params.data());
  }
}
BENCHMARK(BM_adam_step);
