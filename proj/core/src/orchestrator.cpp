#include "latticegan/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "latticegan/metrics.hpp"

namespace latticegan {

namespace {

// Stream tags for seed derivation; every consumer of randomness gets its own
// (seed, tag, ...) stream so checkpoint resume never needs RNG state.
constexpr std::uint64_t kTagDataset = 1;
constexpr std::uint64_t kTagHeldout = 2;
constexpr std::uint64_t kTagGeneration = 3;
constexpr std::uint64_t kTagEpoch = 4;
constexpr std::uint64_t kTagMetrics = 5;
constexpr std::uint64_t kTagInitEval = 6;
constexpr std::uint64_t kTagMixtureSamples = 7;
constexpr std::uint64_t kTagMixtureSearch = 8;
constexpr std::uint64_t kTagGeneratorInit = 0;
constexpr std::uint64_t kTagDiscriminatorInit = 1;

struct RunContext {
  Matrix dataset;
  Matrix heldout;
  std::optional<Matrix> modes;            // mixture centers when known
  std::vector<double> uniform_mode_hist;  // reference histogram for tvd
};

RunContext make_run_context(const ExperimentConfig& cfg) {
  RunContext ctx;
  if (const auto* gm = std::get_if<GaussianMixtureSpec>(&cfg.data.source)) {
    Rng dataset_rng(derive_seed(cfg.seed, kTagDataset));
    ctx.dataset = sample_real(cfg.data, cfg.train_samples, dataset_rng);
    Rng heldout_rng(derive_seed(cfg.seed, kTagHeldout));
    ctx.heldout = sample_real(cfg.data, cfg.metrics.heldout_samples, heldout_rng);
    ctx.modes = gm->centers;
    ctx.uniform_mode_hist.assign(gm->centers.rows, 1.0);
  } else {
    ctx.dataset = load_idx(std::get<IdxFileSpec>(cfg.data.source).path);
    Rng heldout_rng(derive_seed(cfg.seed, kTagHeldout));
    ctx.heldout = sample_rows(ctx.dataset, cfg.metrics.heldout_samples, heldout_rng);
  }

  const std::size_t data_dim = ctx.dataset.cols;
  if (cfg.generator_layers.back().output_dim != data_dim) {
    throw std::invalid_argument("generator output dim does not match data dim " +
                                std::to_string(data_dim));
  }
  if (cfg.discriminator_layers.front().input_dim != data_dim) {
    throw std::invalid_argument("discriminator input dim does not match data dim " +
                                std::to_string(data_dim));
  }
  return ctx;
}

struct CellOutcome {
  CellState state;
  double best_fitness = 0.0;
};

// One coevolutionary generation for one cell, reading neighbor centers
// through `read_center`. Deterministic in (cfg.seed, cell, generation).
CellOutcome cell_generation(const RunContext& ctx, const ExperimentConfig& cfg,
                            const std::function<CellState(std::size_t)>& read_center,
                            std::size_t cell, std::uint64_t generation) {
  Neighborhood nbhd;
  for (const std::size_t c : cfg.topology.neighbors(cell)) {
    CellState state = read_center(c);
    nbhd.generators.push_back(std::move(state.generator));
    nbhd.discriminators.push_back(std::move(state.discriminator));
  }

  std::vector<Matrix> batches;
  if (!cfg.epoch_batches.has_value() || *cfg.epoch_batches > 0) {
    Rng epoch_rng(derive_seed(cfg.seed, kTagEpoch, cell, generation));
    batches = shuffled_batches(ctx.dataset, cfg.data.batch_size, epoch_rng);
    if (cfg.epoch_batches.has_value() && batches.size() > *cfg.epoch_batches) {
      batches.resize(*cfg.epoch_batches);
    }
  }

  Rng rng(derive_seed(cfg.seed, kTagGeneration, cell, generation));
  const Matrix eval_real = sample_rows(ctx.dataset, cfg.data.batch_size, rng);
  const Matrix eval_latent = sample_latent(cfg.latent, cfg.data.batch_size, rng);

  const GenerationResult result =
      coev_generation(nbhd, batches, eval_real, eval_latent, cfg.coev, cfg.loss, rng);

  CellOutcome outcome;
  outcome.state.generator = std::move(nbhd.generators[0]);
  outcome.state.discriminator = std::move(nbhd.discriminators[0]);
  outcome.state.generation = generation;
  outcome.best_fitness = result.center_generator_fitness;
  return outcome;
}

MetricsRecord make_record(const RunContext& ctx, const ExperimentConfig& cfg,
                          const std::string& run_id, std::size_t cell, std::uint64_t generation,
                          const CellState& state, double best_fitness, double mean_l2,
                          std::uint64_t wall_clock_ms) {
  MetricsRecord r;
  r.run_id = run_id;
  r.generation = generation;
  r.cell = cell;
  r.wall_clock_ms = wall_clock_ms;
  r.best_fitness = best_fitness;
  r.mean_l2_diversity = mean_l2;
  r.learning_rate = state.generator.learning_rate;

  Rng rng(derive_seed(cfg.seed, kTagMetrics, cell, generation));
  const Matrix latent = sample_latent(cfg.latent, cfg.metrics.generator_samples, rng);
  const Matrix samples = generate_samples(state.generator, latent);
  r.frechet = frechet_score(samples, ctx.heldout);
  if (ctx.modes.has_value()) {
    const ModeHistogram hist = mode_histogram(samples, *ctx.modes, cfg.metrics.hq_threshold);
    r.tvd = tvd(hist.counts, ctx.uniform_mode_hist);
  }
  return r;
}

double population_mean_l2(const std::vector<CellState>& cells) {
  std::vector<std::vector<double>> params;
  params.reserve(cells.size());
  for (const auto& c : cells) params.push_back(flatten_params(c.generator.network));
  return mean_pairwise_distance(genome_l2_matrix(params));
}

// Initial fitness of a center pair, for the generation-0 records.
double initial_fitness(const RunContext& ctx, const ExperimentConfig& cfg,
                       std::size_t cell, const CellState& state) {
  Rng rng(derive_seed(cfg.seed, kTagInitEval, cell));
  const Matrix eval_real = sample_rows(ctx.dataset, cfg.data.batch_size, rng);
  const Matrix eval_latent = sample_latent(cfg.latent, cfg.data.batch_size, rng);
  return evaluate_pair(state.generator, state.discriminator, eval_real, eval_latent, cfg.loss);
}

class RecordCollector {
 public:
  RecordCollector(std::vector<MetricsRecord>& log, const MetricsSink& sink)
      : log_(log), sink_(sink) {}

  void emit(MetricsRecord record) {
    const std::lock_guard<std::mutex> lock(mutex_);
    if (sink_) sink_(record);
    log_.push_back(std::move(record));
  }

 private:
  std::vector<MetricsRecord>& log_;
  const MetricsSink& sink_;
  std::mutex mutex_;
};

MixtureOutcome optimize_mixtures(const RunContext& ctx, const ExperimentConfig& cfg,
                                 const Population& pop) {
  MixtureOutcome best;
  bool first = true;
  for (std::size_t cell = 0; cell < pop.cells.size(); ++cell) {
    Neighborhood nbhd = copy_neighbours(pop, cfg.topology, cell);
    const std::vector<Genome> generators = std::move(nbhd.generators);
    MixtureModel model;
    model.generators = generators;
    model.weights.assign(generators.size(), 1.0 / static_cast<double>(generators.size()));

    // Common random numbers: fixed latents and fixed selector draws make the
    // fitness a deterministic function of the weights.
    Rng sample_rng(derive_seed(cfg.seed, kTagMixtureSamples, cell));
    const std::size_t count = cfg.mixture.fitness_samples;
    const Matrix latents = sample_latent(cfg.latent, count, sample_rng);
    std::vector<double> selectors(count);
    for (double& u : selectors) u = sample_rng.uniform(0.0, 1.0);

    const Matrix& heldout = ctx.heldout;
    const auto fitness = [&](std::span<const double> weights) {
      std::vector<double> cumulative(weights.size());
      double acc = 0.0;
      for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cumulative[i] = acc;
      }
      Matrix samples(count, generators.front().network.output_dim());
      for (std::size_t i = 0; i < count; ++i) {
        std::size_t pick = static_cast<std::size_t>(
            std::lower_bound(cumulative.begin(), cumulative.end(), selectors[i] * acc) -
            cumulative.begin());
        pick = std::min(pick, generators.size() - 1);
        const auto sample = forward(generators[pick].network, latents.row(i));
        std::copy(sample.begin(), sample.end(), samples.row(i).begin());
      }
      return frechet_score(samples, heldout);
    };

    Rng search_rng(derive_seed(cfg.seed, kTagMixtureSearch, cell));
    model = es_one_plus_one(std::move(model), fitness, cfg.mixture.iterations,
                            cfg.mixture.step_sigma, search_rng);
    const double cell_fitness = fitness(model.weights);

    if (first || cell_fitness < best.fitness) {
      best.model = std::move(model);
      best.cell = cell;
      best.fitness = cell_fitness;
      first = false;
    }
  }
  return best;
}

void emit_initial_records(const RunContext& ctx, const ExperimentConfig& cfg,
                          const Population& pop, const std::string& run_id,
                          RecordCollector& collector) {
  const double mean_l2 = population_mean_l2(pop.cells);
  for (std::size_t cell = 0; cell < pop.cells.size(); ++cell) {
    const double fitness = initial_fitness(ctx, cfg, cell, pop.cells[cell]);
    collector.emit(
        make_record(ctx, cfg, run_id, cell, 0, pop.cells[cell], fitness, mean_l2, 0));
  }
}

void run_sequential(const RunContext& ctx, const ExperimentConfig& cfg, Population& pop,
                    const std::string& run_id, RecordCollector& collector) {
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t generation = pop.cells.front().generation;
  while (true) {
    if (cfg.stop.kind == StopKind::Epochs) {
      if (generation >= cfg.stop.generations) break;
    } else {
      const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count();
      if (static_cast<std::uint64_t>(elapsed) >= cfg.stop.wall_clock_ms) break;
    }
    ++generation;

    const Population snapshot = pop;
    std::vector<double> fitnesses(pop.cells.size(), 0.0);
    for (std::size_t cell = 0; cell < pop.cells.size(); ++cell) {
      CellOutcome outcome = cell_generation(
          ctx, cfg, [&snapshot](std::size_t c) { return snapshot.cells[c]; }, cell, generation);
      fitnesses[cell] = outcome.best_fitness;
      pop.cells[cell] = std::move(outcome.state);
    }

    const double mean_l2 = population_mean_l2(pop.cells);
    for (std::size_t cell = 0; cell < pop.cells.size(); ++cell) {
      // wall_clock_ms stays 0 in sequential mode so seeded runs are
      // byte-identical; timing studies use ParallelAsync.
      collector.emit(make_record(ctx, cfg, run_id, cell, generation, pop.cells[cell],
                                 fitnesses[cell], mean_l2, 0));
    }
  }
}

void run_async(const RunContext& ctx, const ExperimentConfig& cfg, Population& pop,
               const std::string& run_id, RecordCollector& collector) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t z = pop.cells.size();

  struct Slot {
    std::mutex mutex;
    CellState state;
  };
  std::vector<Slot> published(z);
  for (std::size_t c = 0; c < z; ++c) published[c].state = pop.cells[c];

  auto read_center = [&published](std::size_t c) {
    const std::lock_guard<std::mutex> lock(published[c].mutex);
    return published[c].state;
  };

  auto elapsed_ms = [&start]() {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::steady_clock::now() - start)
                                          .count());
  };

  auto worker = [&](std::size_t cell) {
    std::uint64_t generation = published[cell].state.generation;
    while (true) {
      if (cfg.stop.kind == StopKind::Epochs) {
        if (generation >= cfg.stop.generations) break;
      } else if (elapsed_ms() >= cfg.stop.wall_clock_ms) {
        break;
      }
      ++generation;

      CellOutcome outcome = cell_generation(ctx, cfg, read_center, cell, generation);
      {
        const std::lock_guard<std::mutex> lock(published[cell].mutex);
        published[cell].state = outcome.state;
      }

      std::vector<std::vector<double>> params;
      params.reserve(z);
      for (std::size_t c = 0; c < z; ++c) {
        params.push_back(flatten_params(read_center(c).generator.network));
      }
      const double mean_l2 = mean_pairwise_distance(genome_l2_matrix(params));

      collector.emit(make_record(ctx, cfg, run_id, cell, generation, outcome.state,
                                 outcome.best_fitness, mean_l2, elapsed_ms()));
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(z);
  for (std::size_t c = 0; c < z; ++c) threads.emplace_back(worker, c);
  for (auto& t : threads) t.join();

  for (std::size_t c = 0; c < z; ++c) pop.cells[c] = published[c].state;
}

TrainingResult run(const ExperimentConfig& cfg, std::optional<Population> initial,
                   const MetricsSink& sink, const std::string& run_id) {
  validate_experiment_config(cfg);
  const RunContext ctx = make_run_context(cfg);

  TrainingResult result;
  RecordCollector collector(result.log, sink);

  const bool resuming = initial.has_value();
  result.population = resuming ? std::move(*initial) : initialize(cfg);
  if (result.population.cells.size() != cfg.topology.cell_count()) {
    throw std::invalid_argument("population size does not match topology");
  }

  if (!resuming) emit_initial_records(ctx, cfg, result.population, run_id, collector);

  if (cfg.mode == ExecutionMode::SequentialDeterministic) {
    run_sequential(ctx, cfg, result.population, run_id, collector);
  } else {
    run_async(ctx, cfg, result.population, run_id, collector);
  }

  result.best_mixture = optimize_mixtures(ctx, cfg, result.population);
  return result;
}

}  // namespace

void validate_experiment_config(const ExperimentConfig& cfg) {
  const std::size_t z = cfg.topology.cell_count();
  if (z < 1) throw std::invalid_argument("topology must have at least one cell");

  std::size_t min_neighborhood = cfg.topology.neighbors(0).size();
  for (std::size_t c = 1; c < z; ++c) {
    min_neighborhood = std::min(min_neighborhood, cfg.topology.neighbors(c).size());
  }
  if (cfg.coev.tournament_size < 1) {
    throw std::invalid_argument("tournament_size must be >= 1");
  }
  if (cfg.coev.tournament_size > min_neighborhood) {
    throw std::invalid_argument("tournament_size " + std::to_string(cfg.coev.tournament_size) +
                                " exceeds the smallest neighborhood size " +
                                std::to_string(min_neighborhood));
  }
  if (cfg.coev.mutation_probability < 0.0 || cfg.coev.mutation_probability > 1.0) {
    throw std::invalid_argument("mutation_probability must lie in [0, 1]");
  }
  if (!(cfg.coev.mutation_scale >= 0.0)) {
    throw std::invalid_argument("mutation_scale must be >= 0");
  }
  if (cfg.coev.disc_skip < 1) throw std::invalid_argument("disc_skip must be >= 1");
  if (!(cfg.loss.clamp_epsilon > 0.0 && cfg.loss.clamp_epsilon < 0.5)) {
    throw std::invalid_argument("clamp_epsilon must lie in (0, 0.5)");
  }
  if (!(cfg.initial_learning_rate > 0.0)) {
    throw std::invalid_argument("initial_learning_rate must be > 0");
  }
  if (cfg.data.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (cfg.latent.dim < 1) throw std::invalid_argument("latent dim must be >= 1");
  if (cfg.train_samples < 1) throw std::invalid_argument("train_samples must be >= 1");
  if (cfg.stop.kind == StopKind::WallClock && cfg.stop.wall_clock_ms < 1) {
    throw std::invalid_argument("wallclock stop requires wall_clock_ms >= 1");
  }
  if (const auto* gm = std::get_if<GaussianMixtureSpec>(&cfg.data.source)) {
    if (gm->centers.rows < 1) throw std::invalid_argument("gaussian mixture needs >= 1 center");
    if (!(gm->sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be > 0");
  }

  validate_layer_chain(cfg.generator_layers);
  validate_layer_chain(cfg.discriminator_layers);
  if (cfg.generator_layers.front().input_dim != cfg.latent.dim) {
    throw std::invalid_argument("generator input dim must equal latent dim");
  }
  if (cfg.discriminator_layers.back().output_dim != 1 ||
      cfg.discriminator_layers.back().activation != Activation::Sigmoid) {
    throw std::invalid_argument("discriminator must end in a single sigmoid output");
  }
  if (cfg.generator_layers.back().output_dim != cfg.discriminator_layers.front().input_dim) {
    throw std::invalid_argument("generator output dim must equal discriminator input dim");
  }
  if (cfg.mixture.fitness_samples < 2 || cfg.metrics.heldout_samples < 2 ||
      cfg.metrics.generator_samples < 2) {
    throw std::invalid_argument("sample counts for metrics and mixture must be >= 2");
  }
}

Population initialize(const ExperimentConfig& cfg) {
  validate_experiment_config(cfg);
  Population pop;
  pop.cells.resize(cfg.topology.cell_count());
  for (std::size_t cell = 0; cell < pop.cells.size(); ++cell) {
    const std::uint64_t cell_seed = cfg.seed ^ static_cast<std::uint64_t>(cell);
    pop.cells[cell].generator =
        make_genome(cfg.generator_layers, derive_seed(cell_seed, kTagGeneratorInit),
                    cfg.initial_learning_rate);
    pop.cells[cell].discriminator =
        make_genome(cfg.discriminator_layers, derive_seed(cell_seed, kTagDiscriminatorInit),
                    cfg.initial_learning_rate);
    pop.cells[cell].generation = 0;
  }
  return pop;
}

Neighborhood copy_neighbours(const Population& pop, const Topology& topology, std::size_t cell) {
  Neighborhood nbhd;
  for (const std::size_t c : topology.neighbors(cell)) {
    nbhd.generators.push_back(pop.cells[c].generator);
    nbhd.discriminators.push_back(pop.cells[c].discriminator);
  }
  return nbhd;
}

void run_generation(Population& pop, const ExperimentConfig& cfg) {
  validate_experiment_config(cfg);
  if (pop.cells.size() != cfg.topology.cell_count()) {
    throw std::invalid_argument("population size does not match topology");
  }
  const RunContext ctx = make_run_context(cfg);
  const Population snapshot = pop;
  const std::uint64_t generation = snapshot.cells.front().generation + 1;
  for (std::size_t cell = 0; cell < pop.cells.size(); ++cell) {
    CellOutcome outcome = cell_generation(
        ctx, cfg, [&snapshot](std::size_t c) { return snapshot.cells[c]; }, cell, generation);
    pop.cells[cell] = std::move(outcome.state);
  }
}

TrainingResult run_training(const ExperimentConfig& cfg, const MetricsSink& sink,
                            const std::string& run_id) {
  return run(cfg, std::nullopt, sink, run_id);
}

TrainingResult resume_training(Population pop, const ExperimentConfig& cfg,
                               const MetricsSink& sink, const std::string& run_id) {
  return run(cfg, std::move(pop), sink, run_id);
}

}  // namespace latticegan
