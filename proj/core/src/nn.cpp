#include "latticegan/nn.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace latticegan {

namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::Tanh:
      return std::tanh(z);
    case Activation::Sigmoid:
      return 1.0 / (1.0 + std::exp(-z));
    case Activation::Identity:
      return z;
  }
  throw std::logic_error("unknown activation");
}

// Derivative expressed through the post-activation value.
double activate_derivative(Activation a, double value) {
  switch (a) {
    case Activation::Tanh:
      return 1.0 - value * value;
    case Activation::Sigmoid:
      return value * (1.0 - value);
    case Activation::Identity:
      return 1.0;
  }
  throw std::logic_error("unknown activation");
}

}  // namespace

std::size_t param_count(const std::vector<LayerSpec>& specs) {
  std::size_t n = 0;
  for (const auto& l : specs) n += l.input_dim * l.output_dim + l.output_dim;
  return n;
}

void validate_layer_chain(const std::vector<LayerSpec>& specs) {
  if (specs.empty()) throw std::invalid_argument("network needs at least one layer");
  for (const auto& l : specs) {
    if (l.input_dim < 1 || l.output_dim < 1) {
      throw std::invalid_argument("layer dimensions must be >= 1");
    }
  }
  for (std::size_t i = 1; i < specs.size(); ++i) {
    if (specs[i].input_dim != specs[i - 1].output_dim) {
      throw std::invalid_argument(
          "layer dimension mismatch between layer " + std::to_string(i - 1) +
          " (output " + std::to_string(specs[i - 1].output_dim) + ") and layer " +
          std::to_string(i) + " (input " + std::to_string(specs[i].input_dim) + ")");
    }
  }
}

Network init_network(const std::vector<LayerSpec>& specs, std::uint64_t seed) {
  validate_layer_chain(specs);
  Network net;
  net.layers = specs;
  net.params.resize(param_count(specs));

  std::mt19937_64 engine(seed);
  std::size_t offset = 0;
  for (const auto& layer : specs) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.input_dim));
    std::uniform_real_distribution<double> dist(-bound, bound);
    const std::size_t n_weights = layer.input_dim * layer.output_dim;
    for (std::size_t i = 0; i < n_weights; ++i) net.params[offset + i] = dist(engine);
    offset += n_weights;
    // biases stay zero
    offset += layer.output_dim;
  }
  return net;
}

std::vector<double> forward(const Network& net, std::span<const double> input) {
  return forward_trace(net, input).activations.back();
}

ForwardTrace forward_trace(const Network& net, std::span<const double> input) {
  if (net.layers.empty()) throw std::invalid_argument("forward on empty network");
  if (input.size() != net.input_dim()) {
    throw std::invalid_argument("forward: input length " + std::to_string(input.size()) +
                                " does not match first layer input_dim " +
                                std::to_string(net.input_dim()));
  }

  ForwardTrace trace;
  trace.activations.reserve(net.layers.size() + 1);
  trace.activations.emplace_back(input.begin(), input.end());

  std::size_t offset = 0;
  for (const auto& layer : net.layers) {
    const auto& in = trace.activations.back();
    std::vector<double> out(layer.output_dim);
    const double* weights = net.params.data() + offset;
    const double* biases = weights + layer.input_dim * layer.output_dim;
    for (std::size_t o = 0; o < layer.output_dim; ++o) {
      const double* w_row = weights + o * layer.input_dim;
      double z = biases[o];
      for (std::size_t i = 0; i < layer.input_dim; ++i) z += w_row[i] * in[i];
      const double a = activate(layer.activation, z);
      if (!std::isfinite(a)) {
        throw std::runtime_error("forward: non-finite intermediate value");
      }
      out[o] = a;
    }
    trace.activations.push_back(std::move(out));
    offset += layer.input_dim * layer.output_dim + layer.output_dim;
  }
  return trace;
}

BackwardResult backward(const Network& net, std::span<const double> input,
                        std::span<const double> output_grad) {
  return backward_from_trace(net, forward_trace(net, input), output_grad);
}

BackwardResult backward_from_trace(const Network& net, const ForwardTrace& trace,
                                   std::span<const double> output_grad) {
  if (output_grad.size() != net.output_dim()) {
    throw std::invalid_argument("backward: output_grad length does not match output_dim");
  }

  BackwardResult result;
  result.param_grads.assign(net.params.size(), 0.0);

  // delta holds d(objective)/d(pre-activation) of the current layer.
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  const auto& out_act = trace.activations.back();
  for (std::size_t o = 0; o < delta.size(); ++o) {
    delta[o] *= activate_derivative(net.layers.back().activation, out_act[o]);
  }

  // Offsets of each layer's parameter block.
  std::vector<std::size_t> offsets(net.layers.size());
  std::size_t offset = 0;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    offsets[l] = offset;
    offset += net.layers[l].input_dim * net.layers[l].output_dim + net.layers[l].output_dim;
  }

  for (std::size_t li = net.layers.size(); li-- > 0;) {
    const auto& layer = net.layers[li];
    const auto& in_act = trace.activations[li];
    const double* weights = net.params.data() + offsets[li];
    double* w_grads = result.param_grads.data() + offsets[li];
    double* b_grads = w_grads + layer.input_dim * layer.output_dim;

    for (std::size_t o = 0; o < layer.output_dim; ++o) {
      const double d = delta[o];
      double* w_grad_row = w_grads + o * layer.input_dim;
      for (std::size_t i = 0; i < layer.input_dim; ++i) w_grad_row[i] = d * in_act[i];
      b_grads[o] = d;
    }

    std::vector<double> prev_delta(layer.input_dim, 0.0);
    for (std::size_t i = 0; i < layer.input_dim; ++i) {
      double acc = 0.0;
      for (std::size_t o = 0; o < layer.output_dim; ++o) {
        acc += weights[o * layer.input_dim + i] * delta[o];
      }
      prev_delta[i] = acc;
    }
    if (li > 0) {
      const Activation prev_act = net.layers[li - 1].activation;
      for (std::size_t i = 0; i < layer.input_dim; ++i) {
        prev_delta[i] *= activate_derivative(prev_act, in_act[i]);
      }
    }
    delta = std::move(prev_delta);
  }

  result.input_grad = std::move(delta);
  return result;
}

AdamState make_adam_state(std::size_t n_params) {
  AdamState s;
  s.m.assign(n_params, 0.0);
  s.v.assign(n_params, 0.0);
  return s;
}

void adam_step(Network& net, std::span<const double> grads, AdamState& state,
               double learning_rate) {
  if (grads.size() != net.params.size()) {
    throw std::invalid_argument("adam_step: gradient length does not match params");
  }
  if (state.m.size() != net.params.size() || state.v.size() != net.params.size()) {
    throw std::invalid_argument("adam_step: state length does not match params");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("adam_step: learning rate must be positive and finite");
  }
  for (const double g : grads) {
    if (!std::isfinite(g)) throw std::invalid_argument("adam_step: non-finite gradient");
  }

  state.t += 1;
  const double b1t = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double b2t = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < net.params.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
    const double m_hat = state.m[i] / b1t;
    const double v_hat = state.v[i] / b2t;
    net.params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

std::vector<double> flatten_params(const Network& net) { return net.params; }

double l2_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("l2_distance: mismatched vector lengths");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace latticegan
