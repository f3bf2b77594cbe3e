#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace latticegan {

enum class Activation { Tanh, Sigmoid, Identity };

struct LayerSpec {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  Activation activation = Activation::Identity;

  bool operator==(const LayerSpec&) const = default;
};

// Feed-forward network with all weights and biases stored in one flat
// vector: per layer, the weight matrix (output_dim x input_dim, row-major)
// followed by the biases. Flat storage makes parameter-space distances and
// whole-network copies trivial.
struct Network {
  std::vector<LayerSpec> layers;
  std::vector<double> params;

  std::size_t input_dim() const { return layers.front().input_dim; }
  std::size_t output_dim() const { return layers.back().output_dim; }

  bool operator==(const Network&) const = default;
};

std::size_t param_count(const std::vector<LayerSpec>& specs);

// Validates that consecutive layer dimensions chain; throws otherwise.
void validate_layer_chain(const std::vector<LayerSpec>& specs);

// Weights drawn uniformly from [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases
// zero. Deterministic for a fixed seed.
Network init_network(const std::vector<LayerSpec>& specs, std::uint64_t seed);

std::vector<double> forward(const Network& net, std::span<const double> input);

// Per-layer post-activation values from one forward pass; level 0 is the
// input itself. Enough to backpropagate for the activations used here.
struct ForwardTrace {
  std::vector<std::vector<double>> activations;

  const std::vector<double>& output() const { return activations.back(); }
};

ForwardTrace forward_trace(const Network& net, std::span<const double> input);

struct BackwardResult {
  std::vector<double> param_grads;  // aligned with Network::params
  std::vector<double> input_grad;   // gradient w.r.t. the input vector
};

// Chain rule through all layers given d(objective)/d(output).
BackwardResult backward(const Network& net, std::span<const double> input,
                        std::span<const double> output_grad);

// Same, reusing a trace from forward_trace to avoid recomputing the pass.
BackwardResult backward_from_trace(const Network& net, const ForwardTrace& trace,
                                   std::span<const double> output_grad);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  bool operator==(const AdamState&) const = default;
};

AdamState make_adam_state(std::size_t n_params);

// One bias-corrected Adam update in the descent direction of grads.
void adam_step(Network& net, std::span<const double> grads, AdamState& state,
               double learning_rate);

std::vector<double> flatten_params(const Network& net);

double l2_distance(std::span<const double> a, std::span<const double> b);

}  // namespace latticegan
