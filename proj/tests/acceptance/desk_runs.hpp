#pragma once

#include <cstdint>

#include "latticegan/orchestrator.hpp"

namespace latticegan::acceptance {

// The desk benchmark: 8 Gaussians (sigma 0.05) on the unit circle, latent
// dim 8, one hidden layer of 32, batch 100.
ExperimentConfig desk_config(Topology topology, std::uint64_t seed, std::uint64_t generations);

struct DeskRunStats {
  std::uint64_t final_generation = 0;
  double mean_l2_at_150 = 0.0;
  double mean_l2_final = 0.0;
  double final_median_frechet = 0.0;  // across cells at the final generation
  double best_mixture_fitness = 0.0;
  std::size_t mixture_covered_modes = 0;
  double mixture_hq_fraction = 0.0;
  double mixture_tvd = 0.0;
};

// Runs the experiment and reduces its log and best mixture to the statistics
// the acceptance criteria assert on. Results are memoized per config within
// the process, so criteria can share runs.
DeskRunStats run_desk(const ExperimentConfig& cfg);

}  // namespace latticegan::acceptance
