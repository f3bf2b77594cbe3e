#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "latticegan/matrix.hpp"
#include "latticegan/rng.hpp"

namespace latticegan {

struct GaussianMixtureSpec {
  Matrix centers;  // one mode center per row
  double sigma = 0.05;

  bool operator==(const GaussianMixtureSpec&) const = default;
};

struct IdxFileSpec {
  std::string path;

  bool operator==(const IdxFileSpec&) const = default;
};

struct DataSpec {
  std::variant<GaussianMixtureSpec, IdxFileSpec> source;
  std::size_t batch_size = 100;

  bool operator==(const DataSpec&) const = default;
};

// Latent prior is uniform on [-1, 1]^dim.
struct LatentSpec {
  std::size_t dim = 8;

  bool operator==(const LatentSpec&) const = default;
};

// Mode centers evenly spaced on a circle of the given radius.
Matrix ring_of_gaussians(std::size_t modes, double radius);

// Draws n real samples: a uniformly chosen mixture center plus isotropic
// Gaussian noise, or uniform rows with replacement from an IDX file.
Matrix sample_real(const DataSpec& spec, std::size_t n, Rng& rng);

Matrix sample_latent(const LatentSpec& spec, std::size_t n, Rng& rng);

// n rows drawn uniformly with replacement from a loaded dataset.
Matrix sample_rows(const Matrix& dataset, std::size_t n, Rng& rng);

// Loads a big-endian IDX tensor file (magic 0x00000803 for image tensors,
// 0x00000801 for label vectors) and scales bytes from [0,255] to [-1,1].
// Images are flattened to one row per sample.
Matrix load_idx(const std::string& path);

// Writes a dataset as an IDX image tensor (one rows x cols image per sample),
// inverting the [-1,1] scaling back to bytes.
void save_idx(const Matrix& dataset, std::size_t image_rows, std::size_t image_cols,
              const std::string& path);

// One epoch: a seeded random permutation of the dataset partitioned into
// batches of batch_size; the final short batch is kept.
std::vector<Matrix> shuffled_batches(const Matrix& dataset, std::size_t batch_size, Rng& rng);

}  // namespace latticegan
