#pragma once

#include <span>

#include "latticegan/matrix.hpp"
#include "latticegan/nn.hpp"

namespace latticegan {

// One evolvable individual: a network, its evolvable learning rate, and the
// Adam state that travels with the network when it is copied between cells.
struct Genome {
  Network network;
  double learning_rate = 2e-4;
  AdamState adam;

  bool operator==(const Genome&) const = default;
};

Genome make_genome(const std::vector<LayerSpec>& specs, std::uint64_t seed,
                   double learning_rate);

struct GanPair {
  Genome generator;
  Genome discriminator;

  bool operator==(const GanPair&) const = default;
};

enum class MeasuringFunction { Log };

struct LossConfig {
  MeasuringFunction measuring_function = MeasuringFunction::Log;
  double clamp_epsilon = 1e-7;

  bool operator==(const LossConfig&) const = default;
};

// Minimax objective value: mean(log clamp(d_on_real)) + mean(log clamp(1 - d_on_fake)).
// The generator prefers low values, the discriminator high ones.
double gan_loss(std::span<const double> d_on_real, std::span<const double> d_on_fake,
                const LossConfig& cfg);

// Batch forward of the generator over latent rows.
Matrix generate_samples(const Genome& generator, const Matrix& latent);

// Batch forward of the discriminator; one probability per input row.
std::vector<double> discriminate(const Genome& discriminator, const Matrix& inputs);

// Objective value of a (generator, discriminator) pairing on fixed batches.
// This is the fitness entry used by the coevolutionary loop.
double evaluate_pair(const Genome& generator, const Genome& discriminator,
                     const Matrix& real_batch, const Matrix& latent_batch,
                     const LossConfig& cfg);

// One Adam step on the generator, descending mean(log(1 - D(G(z)))) at the
// generator's own learning rate. The discriminator is untouched.
void train_generator_step(Genome& generator, const Genome& discriminator,
                          const Matrix& latent_batch, const LossConfig& cfg);

// One Adam step on the discriminator, ascending the minimax objective
// (descent on its negation). The generator is untouched.
void train_discriminator_step(Genome& discriminator, const Genome& generator,
                              const Matrix& real_batch, const Matrix& latent_batch,
                              const LossConfig& cfg);

}  // namespace latticegan
