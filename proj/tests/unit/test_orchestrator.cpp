#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "latticegan/metrics.hpp"
#include "latticegan/orchestrator.hpp"

using namespace latticegan;

namespace {

ExperimentConfig small_config(Topology topology, std::uint64_t seed, std::uint64_t generations) {
  ExperimentConfig cfg;
  cfg.topology = topology;
  cfg.mode = ExecutionMode::SequentialDeterministic;
  cfg.stop = StopCondition{StopKind::Epochs, generations, 0};
  cfg.seed = seed;
  cfg.coev = CoevParams{2, 0.5, 1e-4, 1};
  cfg.data.source = GaussianMixtureSpec{ring_of_gaussians(4, 1.0), 0.05};
  cfg.data.batch_size = 20;
  cfg.train_samples = 60;
  cfg.latent.dim = 2;
  cfg.generator_layers = {{2, 8, Activation::Tanh}, {8, 2, Activation::Identity}};
  cfg.discriminator_layers = {{2, 8, Activation::Tanh}, {8, 1, Activation::Sigmoid}};
  cfg.mixture = MixtureParams{20, 0.05, 64};
  cfg.metrics = MetricsParams{64, 64, 0.15};
  return cfg;
}

// Setup for propagation runs: gradient training disabled, every
// discriminator fixed to sigmoid(x), every generator outputting a constant.
// The marker cell's constant dominates every pairing, so its spread through
// center updates is exactly the topology's signal propagation.
ExperimentConfig marker_config(Topology topology, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.topology = topology;
  cfg.mode = ExecutionMode::SequentialDeterministic;
  cfg.stop = StopCondition{StopKind::Epochs, 0, 0};
  cfg.seed = seed;
  cfg.coev = CoevParams{2, 0.5, 1e-4, 1};
  cfg.data.source = GaussianMixtureSpec{Matrix(1, 1, 3.0), 0.1};
  cfg.data.batch_size = 10;
  cfg.train_samples = 20;
  cfg.latent.dim = 1;
  cfg.generator_layers = {{1, 1, Activation::Identity}};
  cfg.discriminator_layers = {{1, 1, Activation::Sigmoid}};
  cfg.epoch_batches = 0;
  cfg.mixture = MixtureParams{5, 0.05, 16};
  cfg.metrics = MetricsParams{16, 16, 0.3};
  return cfg;
}

constexpr double kMarker = 50.0;

Population marker_population(const ExperimentConfig& cfg) {
  Population pop = initialize(cfg);
  for (auto& cell : pop.cells) {
    cell.generator.network.params = {0.0, 0.0};       // constant 0 output
    cell.discriminator.network.params = {1.0, 0.0};   // sigmoid(x)
  }
  pop.cells[0].generator.network.params = {0.0, kMarker};
  return pop;
}

std::set<std::size_t> marker_cells(const Population& pop) {
  std::set<std::size_t> cells;
  for (std::size_t c = 0; c < pop.cells.size(); ++c) {
    if (pop.cells[c].generator.network.params[1] == kMarker) cells.insert(c);
  }
  return cells;
}

std::size_t takeover_generations(const ExperimentConfig& cfg) {
  Population pop = marker_population(cfg);
  for (std::size_t generation = 1; generation <= 32; ++generation) {
    run_generation(pop, cfg);
    if (marker_cells(pop).size() == pop.cells.size()) return generation;
  }
  return 0;
}

}  // namespace

TEST_SUITE("test_orchestrator") {

TEST_CASE("initialization is deterministic and cell-diverse") {
  const ExperimentConfig cfg = small_config(Topology::grid(3, 3), 7, 1);
  const Population a = initialize(cfg);
  const Population b = initialize(cfg);
  CHECK(a == b);

  std::vector<std::vector<double>> params;
  for (const auto& cell : a.cells) params.push_back(flatten_params(cell.generator.network));
  const Matrix distances = genome_l2_matrix(params);
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = i + 1; j < 9; ++j) CHECK(distances.at(i, j) > 0.0);
  }
}

TEST_CASE("a zero-generation run returns the untouched initial population") {
  const ExperimentConfig cfg = small_config(Topology::ring(4, 1), 11, 0);
  const TrainingResult result = run_training(cfg);
  CHECK(result.population == initialize(cfg));
  CHECK(result.log.size() == 4);  // one initialization record per cell
  for (const auto& r : result.log) CHECK(r.generation == 0);
  CHECK(result.best_mixture.model.generators.size() ==
        cfg.topology.neighbors(result.best_mixture.cell).size());
}

TEST_CASE("copy_neighbours returns value snapshots in topology order") {
  const ExperimentConfig cfg = marker_config(Topology::ring(6, 1), 13);
  Population pop = initialize(cfg);
  for (std::size_t c = 0; c < 6; ++c) {
    pop.cells[c].generator.network.params = {0.0, static_cast<double>(c)};
  }

  Neighborhood nbhd = copy_neighbours(pop, cfg.topology, 0);
  REQUIRE(nbhd.size() == 3);
  CHECK(nbhd.generators[0].network.params[1] == 0.0);
  CHECK(nbhd.generators[1].network.params[1] == 5.0);
  CHECK(nbhd.generators[2].network.params[1] == 1.0);

  nbhd.generators[1].network.params[1] = 99.0;
  CHECK(pop.cells[5].generator.network.params[1] == 5.0);
}

TEST_CASE("grid neighborhoods carry five members") {
  const ExperimentConfig cfg = marker_config(Topology::grid(3, 3), 17);
  const Population pop = initialize(cfg);
  CHECK(copy_neighbours(pop, cfg.topology, 4).size() == 5);
}

TEST_CASE("one sequential generation reaches exactly the radius-1 neighbors") {
  const ExperimentConfig cfg = marker_config(Topology::ring(6, 1), 19);
  Population pop = marker_population(cfg);
  run_generation(pop, cfg);
  CHECK(marker_cells(pop) == std::set<std::size_t>{0, 1, 5});
}

TEST_CASE("takeover time equals the worst-case propagation hops") {
  const ExperimentConfig ring1 = marker_config(Topology::ring(6, 1), 23);
  CHECK(takeover_generations(ring1) == 3);

  const ExperimentConfig ring2 = marker_config(Topology::ring(6, 2), 23);
  CHECK(takeover_generations(ring2) == 2);

  const ExperimentConfig grid = marker_config(Topology::grid(3, 3), 23);
  CHECK(takeover_generations(grid) == 2);
}

TEST_CASE("a single-cell topology degenerates to plain self-play") {
  const ExperimentConfig cfg = [&] {
    ExperimentConfig c = small_config(Topology::grid(1, 1), 29, 2);
    c.coev.tournament_size = 1;
    return c;
  }();
  const TrainingResult result = run_training(cfg);
  CHECK(result.population.cells.size() == 1);
  CHECK(result.log.size() == 3);  // init + two generations
  CHECK(result.best_mixture.model.generators.size() == 1);
}

TEST_CASE("sequential runs are deterministic end to end") {
  const ExperimentConfig cfg = small_config(Topology::ring(4, 1), 31, 3);
  const TrainingResult a = run_training(cfg, nullptr, "run");
  const TrainingResult b = run_training(cfg, nullptr, "run");
  CHECK(a.population == b.population);
  CHECK(a.log == b.log);
  CHECK(a.best_mixture.fitness == b.best_mixture.fitness);
  CHECK(a.best_mixture.model.weights == b.best_mixture.model.weights);
  CHECK(a.log.size() == 4 * (3 + 1));
}

TEST_CASE("metrics records carry the population diversity and tvd") {
  const ExperimentConfig cfg = small_config(Topology::ring(4, 1), 37, 2);
  const TrainingResult result = run_training(cfg);
  for (const auto& r : result.log) {
    CHECK(r.mean_l2_diversity > 0.0);
    CHECK(r.tvd.has_value());
    CHECK(*r.tvd >= 0.0);
    CHECK(*r.tvd <= 1.0);
    CHECK(r.frechet >= 0.0);
    CHECK(r.learning_rate > 0.0);
    CHECK(r.wall_clock_ms == 0);  // sequential mode
  }
}

TEST_CASE("async runs complete with one record per cell per generation") {
  ExperimentConfig cfg = small_config(Topology::ring(4, 1), 41, 3);
  cfg.mode = ExecutionMode::ParallelAsync;
  const TrainingResult result = run_training(cfg);
  CHECK(result.log.size() == 4 * (3 + 1));
  for (const auto& cell : result.population.cells) CHECK(cell.generation == 3);
}

TEST_CASE("wall-clock stop terminates promptly") {
  ExperimentConfig cfg = small_config(Topology::ring(4, 1), 43, 1000000);
  cfg.stop = StopCondition{StopKind::WallClock, 0, 200};
  const auto start = std::chrono::steady_clock::now();
  const TrainingResult result = run_training(cfg);
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
          .count();
  CHECK(elapsed < 30000);  // 200 ms budget plus one in-flight generation and mixtures
  CHECK(result.log.size() >= 4);
}

TEST_CASE("resuming from a mid-run population matches the uninterrupted run") {
  const ExperimentConfig full_cfg = small_config(Topology::ring(4, 1), 47, 4);
  const TrainingResult full = run_training(full_cfg, nullptr, "x");

  const ExperimentConfig half_cfg = small_config(Topology::ring(4, 1), 47, 2);
  const TrainingResult half = run_training(half_cfg, nullptr, "x");

  const TrainingResult resumed = resume_training(half.population, full_cfg, nullptr, "x");
  CHECK(resumed.population == full.population);
  CHECK(resumed.best_mixture.fitness == full.best_mixture.fitness);

  std::vector<MetricsRecord> tail;
  for (const auto& r : full.log) {
    if (r.generation > 2) tail.push_back(r);
  }
  CHECK(resumed.log == tail);
}

TEST_CASE("config validation names the violated constraint") {
  ExperimentConfig cfg = small_config(Topology::ring(4, 1), 53, 1);
  cfg.coev.tournament_size = 9;
  CHECK_THROWS_WITH_AS(run_training(cfg), doctest::Contains("tournament_size"),
                       std::invalid_argument);

  ExperimentConfig bad_latent = small_config(Topology::ring(4, 1), 53, 1);
  bad_latent.latent.dim = 5;
  CHECK_THROWS_WITH_AS(run_training(bad_latent), doctest::Contains("latent"),
                       std::invalid_argument);
}

}  // TEST_SUITE
