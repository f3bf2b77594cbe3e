#pragma once

#include <span>
#include <vector>

#include "latticegan/matrix.hpp"

namespace latticegan {

// Total variation distance between two histograms with the same bin
// structure: half the L1 distance between their normalizations. In [0, 1].
double tvd(std::span<const double> p, std::span<const double> q);

// Distance between Gaussian fits of two sample sets:
//   ||mu_a - mu_b||^2 + Tr(C_a + C_b - 2 (C_a C_b)^{1/2})
// with sample means and covariances. Requires at least dim+1 samples per set.
double frechet_score(const Matrix& samples_a, const Matrix& samples_b);

// Symmetric matrix of pairwise L2 distances between flat parameter vectors.
Matrix genome_l2_matrix(const std::vector<std::vector<double>>& genomes);

// Mean of the off-diagonal entries of a pairwise-distance matrix.
double mean_pairwise_distance(const Matrix& distance_matrix);

struct ModeHistogram {
  std::vector<double> counts;      // samples assigned to each mode (nearest-mode rule)
  double high_quality_fraction;    // fraction of samples within threshold of a mode
  std::size_t covered_modes;       // modes with at least one high-quality sample
};

ModeHistogram mode_histogram(const Matrix& samples, const Matrix& modes, double threshold);

}  // namespace latticegan
