#include "latticegan/coevolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "latticegan/data.hpp"

namespace latticegan {

namespace {

// Index of the extreme value; ties break toward the lowest index.
template <typename Better>
std::size_t extreme_index(const std::vector<double>& values, Better better) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (better(values[i], values[best])) best = i;
  }
  return best;
}

// tournament_size distinct candidate indices via partial Fisher-Yates.
std::vector<std::size_t> draw_candidates(std::size_t population, std::size_t tournament_size,
                                         Rng& rng) {
  std::vector<std::size_t> pool(population);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < tournament_size; ++i) {
    const std::size_t j = i + rng.index(population - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(tournament_size);
  return pool;
}

}  // namespace

FitnessMatrix evaluate_all_pairs(const Neighborhood& n, const Matrix& eval_real,
                                 const Matrix& eval_latent, const LossConfig& cfg) {
  if (n.generators.size() != n.discriminators.size()) {
    throw std::invalid_argument("evaluate_all_pairs: population sizes differ");
  }
  if (n.size() == 0) throw std::invalid_argument("evaluate_all_pairs: empty neighborhood");

  FitnessMatrix f(n.size());
  for (std::size_t g = 0; g < n.size(); ++g) {
    // The generator's fake batch is fixed per generator, not per opponent.
    const Matrix fake = generate_samples(n.generators[g], eval_latent);
    for (std::size_t d = 0; d < n.size(); ++d) {
      const auto d_real = discriminate(n.discriminators[d], eval_real);
      const auto d_fake = discriminate(n.discriminators[d], fake);
      f.at(g, d) = gan_loss(d_real, d_fake, cfg);
    }
  }
  return f;
}

std::vector<double> generator_fitness(const FitnessMatrix& f) {
  std::vector<double> means(f.size, 0.0);
  for (std::size_t g = 0; g < f.size; ++g) {
    double acc = 0.0;
    for (std::size_t d = 0; d < f.size; ++d) acc += f.at(g, d);
    means[g] = acc / static_cast<double>(f.size);
  }
  return means;
}

std::vector<double> discriminator_fitness(const FitnessMatrix& f) {
  std::vector<double> means(f.size, 0.0);
  for (std::size_t d = 0; d < f.size; ++d) {
    double acc = 0.0;
    for (std::size_t g = 0; g < f.size; ++g) acc += f.at(g, d);
    means[d] = acc / static_cast<double>(f.size);
  }
  return means;
}

std::pair<std::size_t, std::size_t> tournament_select(const FitnessMatrix& f,
                                                      std::size_t tournament_size, Rng& rng) {
  if (tournament_size < 1) throw std::invalid_argument("tournament_select: size must be >= 1");
  if (tournament_size > f.size) {
    throw std::invalid_argument("tournament_select: tournament size exceeds population");
  }

  const std::vector<double> g_fit = generator_fitness(f);
  const std::vector<double> d_fit = discriminator_fitness(f);

  auto run_tournament = [&](const std::vector<double>& fitness, bool lower_better) {
    const auto candidates = draw_candidates(f.size, tournament_size, rng);
    std::size_t best = candidates[0];
    for (const std::size_t c : candidates) {
      const bool better = lower_better ? fitness[c] < fitness[best] : fitness[c] > fitness[best];
      const bool tie_lower = fitness[c] == fitness[best] && c < best;
      if (better || tie_lower) best = c;
    }
    return best;
  };

  const std::size_t g_winner = run_tournament(g_fit, /*lower_better=*/true);
  const std::size_t d_winner = run_tournament(d_fit, /*lower_better=*/false);
  return {g_winner, d_winner};
}

double mutate_learning_rate(double rate, double beta, double scale, Rng& rng) {
  if (!(rate > 0.0)) throw std::invalid_argument("mutate_learning_rate: rate must be > 0");
  if (!rng.bernoulli(beta)) return rate;
  const double mutated = rate + rng.gaussian(0.0, scale);
  return std::clamp(mutated, 1e-8, 1.0);
}

GenerationResult coev_generation(Neighborhood& n, const std::vector<Matrix>& training_batches,
                                 const Matrix& eval_real, const Matrix& eval_latent,
                                 const CoevParams& params, const LossConfig& cfg, Rng& rng) {
  if (n.size() == 0) throw std::invalid_argument("coev_generation: empty neighborhood");
  if (params.disc_skip < 1) throw std::invalid_argument("coev_generation: disc_skip must be >= 1");

  const FitnessMatrix fitness = evaluate_all_pairs(n, eval_real, eval_latent, cfg);
  const auto [g_parent, d_parent] = tournament_select(fitness, params.tournament_size, rng);

  Genome g_best = n.generators[g_parent];
  Genome d_best = n.discriminators[d_parent];
  const std::size_t latent_dim = g_best.network.input_dim();

  // The cell's evolvable learning rate starts from the selected generator's
  // and is shared by both offspring while they train.
  double rate = g_best.learning_rate;
  for (std::size_t b = 0; b < training_batches.size(); ++b) {
    const Matrix& real_batch = training_batches[b];
    rate = mutate_learning_rate(rate, params.mutation_probability, params.mutation_scale, rng);
    g_best.learning_rate = rate;
    d_best.learning_rate = rate;

    const Genome& d_opponent = n.discriminators[rng.index(n.size())];
    const Matrix g_latent = sample_latent(LatentSpec{latent_dim}, real_batch.rows, rng);
    train_generator_step(g_best, d_opponent, g_latent, cfg);

    const Genome& g_opponent = n.generators[rng.index(n.size())];
    if (b % params.disc_skip == 0) {
      const Matrix d_latent = sample_latent(LatentSpec{latent_dim}, real_batch.rows, rng);
      train_discriminator_step(d_best, g_opponent, real_batch, d_latent, cfg);
    }
  }

  // Insert offspring, re-evaluate on the same batch, drop the worst of each
  // population, and place the best of each at the center.
  n.generators.push_back(std::move(g_best));
  n.discriminators.push_back(std::move(d_best));

  const FitnessMatrix expanded = evaluate_all_pairs(n, eval_real, eval_latent, cfg);
  const std::vector<double> g_fit = generator_fitness(expanded);
  const std::vector<double> d_fit = discriminator_fitness(expanded);

  const std::size_t g_worst = extreme_index(g_fit, [](double a, double b) { return a > b; });
  const std::size_t d_worst = extreme_index(d_fit, [](double a, double b) { return a < b; });
  n.generators.erase(n.generators.begin() + static_cast<std::ptrdiff_t>(g_worst));
  n.discriminators.erase(n.discriminators.begin() + static_cast<std::ptrdiff_t>(d_worst));

  // Removing an individual does not change the others' row/column means over
  // the surviving opponents only if we recompute on the submatrix, so do that.
  const std::size_t s = n.size();
  std::vector<double> g_fit_sub(s, 0.0);
  std::vector<double> d_fit_sub(s, 0.0);
  {
    std::vector<std::size_t> g_keep;
    std::vector<std::size_t> d_keep;
    for (std::size_t i = 0; i <= s; ++i) {
      if (i != g_worst) g_keep.push_back(i);
      if (i != d_worst) d_keep.push_back(i);
    }
    for (std::size_t gi = 0; gi < s; ++gi) {
      double acc = 0.0;
      for (std::size_t di = 0; di < s; ++di) acc += expanded.at(g_keep[gi], d_keep[di]);
      g_fit_sub[gi] = acc / static_cast<double>(s);
    }
    for (std::size_t di = 0; di < s; ++di) {
      double acc = 0.0;
      for (std::size_t gi = 0; gi < s; ++gi) acc += expanded.at(g_keep[gi], d_keep[di]);
      d_fit_sub[di] = acc / static_cast<double>(s);
    }
  }

  const std::size_t g_center = extreme_index(g_fit_sub, [](double a, double b) { return a < b; });
  const std::size_t d_center = extreme_index(d_fit_sub, [](double a, double b) { return a > b; });
  std::swap(n.generators[0], n.generators[g_center]);
  std::swap(n.discriminators[0], n.discriminators[d_center]);

  return GenerationResult{g_fit_sub[g_center], d_fit_sub[d_center]};
}

}  // namespace latticegan
