#include "latticegan/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latticegan/data.hpp"

namespace latticegan {

MixtureModel uniform_mixture(std::vector<Genome> generators) {
  if (generators.empty()) throw std::invalid_argument("uniform_mixture: no generators");
  MixtureModel m;
  m.weights.assign(generators.size(), 1.0 / static_cast<double>(generators.size()));
  m.generators = std::move(generators);
  return m;
}

std::vector<double> normalize_weights(std::span<const double> raw) {
  if (raw.empty()) throw std::invalid_argument("normalize_weights: empty vector");
  double total = 0.0;
  for (const double v : raw) {
    if (v < 0.0) throw std::invalid_argument("normalize_weights: negative entry");
    total += v;
  }
  if (total <= 0.0) throw std::invalid_argument("normalize_weights: all entries are zero");
  std::vector<double> out(raw.begin(), raw.end());
  for (double& v : out) v /= total;
  return out;
}

Matrix sample_mixture(const MixtureModel& m, std::size_t count, Rng& rng) {
  if (count < 1) throw std::invalid_argument("sample_mixture: count must be >= 1");
  if (m.generators.empty()) throw std::invalid_argument("sample_mixture: no generators");
  if (m.generators.size() != m.weights.size()) {
    throw std::invalid_argument("sample_mixture: weight/generator count mismatch");
  }

  const std::size_t latent_dim = m.generators.front().network.input_dim();
  const std::size_t data_dim = m.generators.front().network.output_dim();
  for (const auto& g : m.generators) {
    if (g.network.input_dim() != latent_dim || g.network.output_dim() != data_dim) {
      throw std::invalid_argument("sample_mixture: generators disagree on dimensions");
    }
  }

  std::vector<double> cumulative(m.weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    acc += m.weights[i];
    cumulative[i] = acc;
  }

  Matrix out(count, data_dim);
  const LatentSpec latent{latent_dim};
  for (std::size_t r = 0; r < count; ++r) {
    std::size_t pick = 0;
    if (m.generators.size() > 1) {
      const double u = rng.uniform(0.0, acc);
      pick = static_cast<std::size_t>(
          std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
      pick = std::min(pick, m.generators.size() - 1);
    }
    const Matrix z = sample_latent(latent, 1, rng);
    const auto sample = forward(m.generators[pick].network, z.row(0));
    std::copy(sample.begin(), sample.end(), out.row(r).begin());
  }
  return out;
}

MixtureModel es_one_plus_one(MixtureModel m, const MixtureFitness& fitness,
                             std::size_t iterations, double step_sigma, Rng& rng,
                             std::vector<double>* fitness_trace) {
  if (m.weights.empty()) throw std::invalid_argument("es_one_plus_one: empty weights");
  m.weights = normalize_weights(m.weights);

  double best_fitness = fitness(m.weights);
  double sigma = step_sigma;
  std::size_t window_successes = 0;
  constexpr std::size_t kWindow = 10;
  constexpr double kFactor = 1.22;

  for (std::size_t it = 1; it <= iterations; ++it) {
    std::vector<double> child(m.weights.size());
    double total = 0.0;
    for (std::size_t i = 0; i < child.size(); ++i) {
      child[i] = std::max(0.0, m.weights[i] + rng.gaussian(0.0, sigma));
      total += child[i];
    }

    // A child clamped to all-zero has no simplex projection; reject it.
    if (total > 0.0) {
      for (double& v : child) v /= total;
      const double child_fitness = fitness(child);
      if (child_fitness <= best_fitness) {
        m.weights = std::move(child);
        best_fitness = child_fitness;
        ++window_successes;
      }
    }

    if (fitness_trace != nullptr) fitness_trace->push_back(best_fitness);

    if (it % kWindow == 0) {
      const double rate = static_cast<double>(window_successes) / static_cast<double>(kWindow);
      sigma = rate > 0.2 ? sigma * kFactor : sigma / kFactor;
      window_successes = 0;
    }
  }
  return m;
}

}  // namespace latticegan
