#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "latticegan/gan.hpp"
#include "latticegan/matrix.hpp"
#include "latticegan/rng.hpp"

namespace latticegan {

// A cell's sub-population: its own center pair at index 0 plus value copies
// of the neighbor cells' centers. Generators and discriminators are indexed
// in the same neighbor order.
struct Neighborhood {
  std::vector<Genome> generators;
  std::vector<Genome> discriminators;

  std::size_t size() const { return generators.size(); }
};

struct CoevParams {
  std::size_t tournament_size = 2;
  double mutation_probability = 0.5;
  double mutation_scale = 1e-4;
  std::size_t disc_skip = 1;

  bool operator==(const CoevParams&) const = default;
};

// All-vs-all objective values: entry (i, j) = L(g_i, d_j) on the fixed
// evaluation batch. Generators prefer low entries, discriminators high ones.
struct FitnessMatrix {
  std::size_t size = 0;
  std::vector<double> values;

  FitnessMatrix() = default;
  explicit FitnessMatrix(std::size_t s) : size(s), values(s * s, 0.0) {}

  double at(std::size_t g, std::size_t d) const { return values[g * size + d]; }
  double& at(std::size_t g, std::size_t d) { return values[g * size + d]; }
};

FitnessMatrix evaluate_all_pairs(const Neighborhood& n, const Matrix& eval_real,
                                 const Matrix& eval_latent, const LossConfig& cfg);

// Mean objective over the opponent axis: row means for generators (lower is
// better), column means for discriminators (higher is better).
std::vector<double> generator_fitness(const FitnessMatrix& f);
std::vector<double> discriminator_fitness(const FitnessMatrix& f);

// Draws tournament_size distinct candidates per population and returns the
// indices of the winning generator and discriminator. Ties break toward the
// lowest index. The generator tournament consumes rng before the
// discriminator tournament.
std::pair<std::size_t, std::size_t> tournament_select(const FitnessMatrix& f,
                                                      std::size_t tournament_size, Rng& rng);

// With probability beta, perturbs the rate by N(0, scale^2) and clamps the
// result to [1e-8, 1]; otherwise returns it unchanged.
double mutate_learning_rate(double rate, double beta, double scale, Rng& rng);

struct GenerationResult {
  double center_generator_fitness = 0.0;
  double center_discriminator_fitness = 0.0;
};

// One full coevolutionary generation over a neighborhood, in place:
// evaluate all pairs on the evaluation batch, tournament-select the parents,
// train their offspring over the training batches against uniformly random
// opponents, insert the offspring, re-evaluate, drop the worst individual of
// each population, and move the best of each to the center slot.
//
// rng consumption order per generation: tournament (generators, then
// discriminators); per batch: learning-rate mutation, discriminator-opponent
// index, generator latent batch, generator-opponent index, discriminator
// latent batch.
GenerationResult coev_generation(Neighborhood& n, const std::vector<Matrix>& training_batches,
                                 const Matrix& eval_real, const Matrix& eval_latent,
                                 const CoevParams& params, const LossConfig& cfg, Rng& rng);

}  // namespace latticegan
