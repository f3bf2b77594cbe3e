#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latticegan/coevolution.hpp"
#include "latticegan/data.hpp"
#include "latticegan/mixture.hpp"
#include "latticegan/runlog.hpp"
#include "latticegan/topology.hpp"

namespace latticegan {

// SequentialDeterministic adds a per-generation barrier and fixed cell order
// so runs are bit-reproducible; ParallelAsync runs one worker per cell that
// reads whatever neighbor centers are currently published.
enum class ExecutionMode { SequentialDeterministic, ParallelAsync };

enum class StopKind { Epochs, WallClock };

struct StopCondition {
  StopKind kind = StopKind::Epochs;
  std::uint64_t generations = 300;   // Epochs
  std::uint64_t wall_clock_ms = 0;   // WallClock

  bool operator==(const StopCondition&) const = default;
};

struct MixtureParams {
  std::size_t iterations = 200;
  double step_sigma = 0.05;
  std::size_t fitness_samples = 1000;

  bool operator==(const MixtureParams&) const = default;
};

struct MetricsParams {
  std::size_t heldout_samples = 1000;
  std::size_t generator_samples = 512;
  double hq_threshold = 0.15;

  bool operator==(const MetricsParams&) const = default;
};

struct ExperimentConfig {
  Topology topology = Topology::ring(6, 1);
  ExecutionMode mode = ExecutionMode::SequentialDeterministic;
  StopCondition stop;
  std::uint64_t seed = 42;
  CoevParams coev;
  LossConfig loss;
  DataSpec data;
  LatentSpec latent{8};
  std::vector<LayerSpec> generator_layers;
  std::vector<LayerSpec> discriminator_layers;
  double initial_learning_rate = 2e-4;
  // Synthetic sources are materialized once into this many training samples.
  std::size_t train_samples = 1000;
  // Caps the number of batches consumed per generation; unset means the
  // whole epoch. Zero disables gradient training entirely.
  std::optional<std::size_t> epoch_batches;
  MixtureParams mixture;
  MetricsParams metrics;

  bool operator==(const ExperimentConfig&) const = default;
};

// Throws naming the violated invariant.
void validate_experiment_config(const ExperimentConfig& cfg);

struct CellState {
  Genome generator;
  Genome discriminator;
  std::uint64_t generation = 0;

  bool operator==(const CellState&) const = default;
};

struct Population {
  std::vector<CellState> cells;

  bool operator==(const Population&) const = default;
};

// One center pair per cell, seeded from seed XOR cell index; learning rates
// start at the configured initial value.
Population initialize(const ExperimentConfig& cfg);

// Value snapshot of a cell's neighborhood centers in topology order; entry 0
// is the cell's own center. Mutating the copies never touches the sources.
Neighborhood copy_neighbours(const Population& pop, const Topology& topology, std::size_t cell);

// One synchronous sweep: every cell reads the generation-start snapshot,
// runs a coevolutionary generation, and writes back its new center.
void run_generation(Population& pop, const ExperimentConfig& cfg);

struct MixtureOutcome {
  MixtureModel model;
  std::size_t cell = 0;
  double fitness = 0.0;
};

struct TrainingResult {
  Population population;
  MixtureOutcome best_mixture;
  std::vector<MetricsRecord> log;
};

// Full run: initialize, train until the stop condition, then optimize each
// cell's ensemble weights and return the best cell's mixture. Every record
// is appended to the returned log and also forwarded to sink when set.
TrainingResult run_training(const ExperimentConfig& cfg, const MetricsSink& sink = nullptr,
                            const std::string& run_id = "");

// Continues a run from a checkpointed population (per-cell generation
// counters included). In sequential mode the tail of the run is identical to
// an uninterrupted one.
TrainingResult resume_training(Population pop, const ExperimentConfig& cfg,
                               const MetricsSink& sink = nullptr,
                               const std::string& run_id = "");

}  // namespace latticegan
