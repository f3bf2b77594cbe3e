#pragma once

#include <functional>
#include <span>
#include <vector>

#include "latticegan/gan.hpp"
#include "latticegan/matrix.hpp"
#include "latticegan/rng.hpp"

namespace latticegan {

// Weighted ensemble of a neighborhood's generators. Weights live on the
// probability simplex.
struct MixtureModel {
  std::vector<Genome> generators;
  std::vector<double> weights;
};

MixtureModel uniform_mixture(std::vector<Genome> generators);

// Proportional scaling of a nonnegative vector to sum 1.
std::vector<double> normalize_weights(std::span<const double> raw);

// Each sample picks generator i with probability weights[i], then maps a
// uniform [-1,1] latent through it. With a single generator the selection
// draw is skipped, so sampling matches the generator's own stream.
Matrix sample_mixture(const MixtureModel& m, std::size_t count, Rng& rng);

using MixtureFitness = std::function<double(std::span<const double> weights)>;

// Elitist (1+1)-ES over the simplex: perturb each weight by N(0, sigma^2),
// clamp at zero, renormalize, and accept iff fitness does not worsen. The
// step size follows the 1/5-success rule over 10-iteration windows
// (sigma *= 1.22 on success rate > 1/5, sigma /= 1.22 otherwise).
// fitness_trace, when given, receives the best-so-far fitness per iteration.
MixtureModel es_one_plus_one(MixtureModel m, const MixtureFitness& fitness,
                             std::size_t iterations, double step_sigma, Rng& rng,
                             std::vector<double>* fitness_trace = nullptr);

}  // namespace latticegan
