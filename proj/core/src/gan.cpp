#include "latticegan/gan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latticegan {

namespace {

double clamp_prob(double p, double eps) { return std::clamp(p, eps, 1.0 - eps); }

void check_learning_rate(const Genome& g) {
  if (!(g.learning_rate > 0.0) || !std::isfinite(g.learning_rate)) {
    throw std::invalid_argument("genome learning rate must be positive and finite");
  }
}

void check_loss_config(const LossConfig& cfg) {
  if (!(cfg.clamp_epsilon > 0.0) || !(cfg.clamp_epsilon < 0.5)) {
    throw std::invalid_argument("clamp_epsilon must lie in (0, 0.5)");
  }
}

}  // namespace

Genome make_genome(const std::vector<LayerSpec>& specs, std::uint64_t seed,
                   double learning_rate) {
  Genome g;
  g.network = init_network(specs, seed);
  g.learning_rate = learning_rate;
  g.adam = make_adam_state(g.network.params.size());
  check_learning_rate(g);
  return g;
}

double gan_loss(std::span<const double> d_on_real, std::span<const double> d_on_fake,
                const LossConfig& cfg) {
  check_loss_config(cfg);
  if (d_on_real.empty() || d_on_fake.empty()) {
    throw std::invalid_argument("gan_loss: empty batch");
  }
  if (d_on_real.size() != d_on_fake.size()) {
    throw std::invalid_argument("gan_loss: real and fake batch lengths differ");
  }
  for (const double p : d_on_real) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gan_loss: probability outside [0,1]");
  }
  for (const double p : d_on_fake) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gan_loss: probability outside [0,1]");
  }

  const double eps = cfg.clamp_epsilon;
  double real_term = 0.0;
  for (const double p : d_on_real) real_term += std::log(clamp_prob(p, eps));
  real_term /= static_cast<double>(d_on_real.size());

  double fake_term = 0.0;
  for (const double p : d_on_fake) fake_term += std::log(clamp_prob(1.0 - p, eps));
  fake_term /= static_cast<double>(d_on_fake.size());

  return real_term + fake_term;
}

Matrix generate_samples(const Genome& generator, const Matrix& latent) {
  if (latent.cols != generator.network.input_dim()) {
    throw std::invalid_argument("generate_samples: latent dim does not match generator input");
  }
  Matrix out(latent.rows, generator.network.output_dim());
  for (std::size_t r = 0; r < latent.rows; ++r) {
    const auto sample = forward(generator.network, latent.row(r));
    std::copy(sample.begin(), sample.end(), out.row(r).begin());
  }
  return out;
}

std::vector<double> discriminate(const Genome& discriminator, const Matrix& inputs) {
  if (inputs.cols != discriminator.network.input_dim()) {
    throw std::invalid_argument("discriminate: input dim does not match discriminator");
  }
  if (discriminator.network.output_dim() != 1) {
    throw std::invalid_argument("discriminate: discriminator must have a single output");
  }
  std::vector<double> probs(inputs.rows);
  for (std::size_t r = 0; r < inputs.rows; ++r) {
    probs[r] = forward(discriminator.network, inputs.row(r))[0];
  }
  return probs;
}

double evaluate_pair(const Genome& generator, const Genome& discriminator,
                     const Matrix& real_batch, const Matrix& latent_batch,
                     const LossConfig& cfg) {
  if (real_batch.rows == 0 || latent_batch.rows == 0) {
    throw std::invalid_argument("evaluate_pair: empty batch");
  }
  const Matrix fake = generate_samples(generator, latent_batch);
  const auto d_real = discriminate(discriminator, real_batch);
  const auto d_fake = discriminate(discriminator, fake);
  return gan_loss(d_real, d_fake, cfg);
}

void train_generator_step(Genome& generator, const Genome& discriminator,
                          const Matrix& latent_batch, const LossConfig& cfg) {
  check_loss_config(cfg);
  check_learning_rate(generator);
  if (latent_batch.rows == 0) throw std::invalid_argument("train_generator_step: empty batch");
  if (latent_batch.cols != generator.network.input_dim()) {
    throw std::invalid_argument("train_generator_step: latent dim mismatch");
  }
  if (generator.network.output_dim() != discriminator.network.input_dim()) {
    throw std::invalid_argument("train_generator_step: generator/discriminator dim mismatch");
  }

  const double eps = cfg.clamp_epsilon;
  const double inv_batch = 1.0 / static_cast<double>(latent_batch.rows);
  std::vector<double> grads(generator.network.params.size(), 0.0);

  for (std::size_t r = 0; r < latent_batch.rows; ++r) {
    const ForwardTrace g_trace = forward_trace(generator.network, latent_batch.row(r));
    const auto& fake = g_trace.output();
    const ForwardTrace d_trace = forward_trace(discriminator.network, fake);
    const double p = d_trace.output()[0];

    // d/dp of mean(log(1 - p)); the denominator is clamped so the gradient
    // stays bounded when the discriminator saturates.
    const double dj_dp = -inv_batch / std::max(1.0 - p, eps);
    const BackwardResult through_d =
        backward_from_trace(discriminator.network, d_trace, std::span(&dj_dp, 1));
    const BackwardResult through_g =
        backward_from_trace(generator.network, g_trace, through_d.input_grad);
    for (std::size_t i = 0; i < grads.size(); ++i) grads[i] += through_g.param_grads[i];
  }

  adam_step(generator.network, grads, generator.adam, generator.learning_rate);
}

void train_discriminator_step(Genome& discriminator, const Genome& generator,
                              const Matrix& real_batch, const Matrix& latent_batch,
                              const LossConfig& cfg) {
  check_loss_config(cfg);
  check_learning_rate(discriminator);
  if (real_batch.rows == 0 || latent_batch.rows == 0) {
    throw std::invalid_argument("train_discriminator_step: empty batch");
  }
  if (real_batch.cols != discriminator.network.input_dim()) {
    throw std::invalid_argument("train_discriminator_step: real batch dim mismatch");
  }

  const double eps = cfg.clamp_epsilon;
  std::vector<double> grads(discriminator.network.params.size(), 0.0);

  // Descent direction on -[mean(log D(x)) + mean(log(1 - D(G(z))))].
  const double inv_real = 1.0 / static_cast<double>(real_batch.rows);
  for (std::size_t r = 0; r < real_batch.rows; ++r) {
    const ForwardTrace d_trace = forward_trace(discriminator.network, real_batch.row(r));
    const double p = d_trace.output()[0];
    const double dj_dp = -inv_real / std::max(p, eps);
    const BackwardResult back =
        backward_from_trace(discriminator.network, d_trace, std::span(&dj_dp, 1));
    for (std::size_t i = 0; i < grads.size(); ++i) grads[i] += back.param_grads[i];
  }

  const Matrix fake = generate_samples(generator, latent_batch);
  const double inv_fake = 1.0 / static_cast<double>(fake.rows);
  for (std::size_t r = 0; r < fake.rows; ++r) {
    const ForwardTrace d_trace = forward_trace(discriminator.network, fake.row(r));
    const double p = d_trace.output()[0];
    const double dj_dp = inv_fake / std::max(1.0 - p, eps);
    const BackwardResult back =
        backward_from_trace(discriminator.network, d_trace, std::span(&dj_dp, 1));
    for (std::size_t i = 0; i < grads.size(); ++i) grads[i] += back.param_grads[i];
  }

  adam_step(discriminator.network, grads, discriminator.adam, discriminator.learning_rate);
}

}  // namespace latticegan
