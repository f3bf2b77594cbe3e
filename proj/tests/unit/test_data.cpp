#include <doctest.h>

#include <iterator>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "latticegan/data.hpp"

using namespace latticegan;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

// Hand-built IDX fixture: two 2x2 images, pixels alternating 0 and 255.
std::vector<unsigned char> idx_fixture_bytes() {
  std::vector<unsigned char> bytes = {
      0x00, 0x00, 0x08, 0x03,  // magic: ubyte, 3 dims
      0x00, 0x00, 0x00, 0x02,  // 2 images
      0x00, 0x00, 0x00, 0x02,  // 2 rows
      0x00, 0x00, 0x00, 0x02,  // 2 cols
  };
  const unsigned char pixels[8] = {0, 255, 255, 0, 255, 0, 0, 255};
  bytes.insert(bytes.end(), pixels, pixels + 8);
  return bytes;
}

}  // namespace

TEST_SUITE("test_data") {

TEST_CASE("a near-degenerate mixture collapses to its center") {
  DataSpec spec;
  spec.source = GaussianMixtureSpec{Matrix(1, 2, 0.0), 1e-12};
  Rng rng(1);
  const Matrix samples = sample_real(spec, 50, rng);
  for (const double v : samples.data) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("mixture centers are hit at the expected binomial rates") {
  const std::size_t modes = 8;
  const std::size_t n = 80000;
  DataSpec spec;
  spec.source = GaussianMixtureSpec{ring_of_gaussians(modes, 1.0), 0.05};
  Rng rng(2);
  const Matrix samples = sample_real(spec, n, rng);

  const Matrix centers = ring_of_gaussians(modes, 1.0);
  std::vector<std::size_t> counts(modes, 0);
  for (std::size_t r = 0; r < samples.rows; ++r) {
    std::size_t best = 0;
    double best_d = 1e300;
    for (std::size_t m = 0; m < modes; ++m) {
      const double dx = samples.at(r, 0) - centers.at(m, 0);
      const double dy = samples.at(r, 1) - centers.at(m, 1);
      if (dx * dx + dy * dy < best_d) {
        best_d = dx * dx + dy * dy;
        best = m;
      }
    }
    counts[best]++;
  }

  const double p = 1.0 / static_cast<double>(modes);
  const double sigma = std::sqrt(static_cast<double>(n) * p * (1.0 - p));
  for (const std::size_t c : counts) {
    CHECK(std::abs(static_cast<double>(c) - static_cast<double>(n) * p) <= 3.0 * sigma);
  }
}

TEST_CASE("sampling is deterministic per seed") {
  DataSpec spec;
  spec.source = GaussianMixtureSpec{ring_of_gaussians(4, 1.0), 0.1};
  Rng a(3), b(3);
  CHECK(sample_real(spec, 32, a) == sample_real(spec, 32, b));
}

TEST_CASE("latent samples respect bounds, mean, and shape") {
  Rng rng(4);
  const Matrix big = sample_latent(LatentSpec{1}, 1000000, rng);
  double mean = 0.0;
  for (const double v : big.data) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
    mean += v;
  }
  mean /= static_cast<double>(big.data.size());
  CHECK(std::abs(mean) < 0.01);

  const Matrix small = sample_latent(LatentSpec{3}, 5, rng);
  CHECK(small.rows == 5);
  CHECK(small.cols == 3);
}

TEST_CASE("idx fixture loads with exact scaling") {
  const std::string path = temp_path("latticegan_fixture.idx");
  write_bytes(path, idx_fixture_bytes());
  const Matrix data = load_idx(path);
  CHECK(data.rows == 2);
  CHECK(data.cols == 4);
  CHECK(data.at(0, 0) == doctest::Approx(-1.0));
  CHECK(data.at(0, 1) == doctest::Approx(1.0));
  CHECK(data.at(1, 0) == doctest::Approx(1.0));
  CHECK(data.at(1, 3) == doctest::Approx(1.0));
}

TEST_CASE("idx rejects a wrong magic") {
  auto bytes = idx_fixture_bytes();
  bytes[2] = 0x09;
  const std::string path = temp_path("latticegan_badmagic.idx");
  write_bytes(path, bytes);
  CHECK_THROWS_WITH_AS(load_idx(path), doctest::Contains("bad magic"), std::runtime_error);
}

TEST_CASE("idx rejects a truncated payload") {
  auto bytes = idx_fixture_bytes();
  bytes.resize(bytes.size() - 3);
  const std::string path = temp_path("latticegan_truncated.idx");
  write_bytes(path, bytes);
  CHECK_THROWS_WITH_AS(load_idx(path), doctest::Contains("truncated"), std::runtime_error);
}

TEST_CASE("idx round trip is bit-identical") {
  const std::string path = temp_path("latticegan_roundtrip.idx");
  write_bytes(path, idx_fixture_bytes());
  const Matrix data = load_idx(path);

  const std::string second = temp_path("latticegan_roundtrip2.idx");
  save_idx(data, 2, 2, second);
  const Matrix reloaded = load_idx(second);
  CHECK(data == reloaded);

  std::ifstream a(path, std::ios::binary), b(second, std::ios::binary);
  const std::string bytes_a((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string bytes_b((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(bytes_a == bytes_b);
}

TEST_CASE("one epoch partitions the dataset with a short final batch") {
  Matrix dataset(10, 1);
  for (std::size_t i = 0; i < 10; ++i) dataset.at(i, 0) = static_cast<double>(i);

  Rng rng(5);
  const auto batches = shuffled_batches(dataset, 3, rng);
  REQUIRE(batches.size() == 4);
  CHECK(batches[0].rows == 3);
  CHECK(batches[1].rows == 3);
  CHECK(batches[2].rows == 3);
  CHECK(batches[3].rows == 1);

  std::multiset<double> seen;
  for (const auto& batch : batches) {
    for (const double v : batch.data) seen.insert(v);
  }
  std::multiset<double> expected(dataset.data.begin(), dataset.data.end());
  CHECK(seen == expected);
}

TEST_CASE("different epoch seeds give different permutations") {
  Matrix dataset(32, 1);
  for (std::size_t i = 0; i < dataset.rows; ++i) dataset.at(i, 0) = static_cast<double>(i);

  Rng a(6), b(7);
  const auto first = shuffled_batches(dataset, 32, a);
  const auto second = shuffled_batches(dataset, 32, b);
  CHECK(first[0].data != second[0].data);
}

TEST_CASE("empty datasets and zero batch sizes are rejected") {
  Matrix empty;
  Rng rng(8);
  CHECK_THROWS_AS(shuffled_batches(empty, 3, rng), std::invalid_argument);
  Matrix one(1, 1, 0.0);
  CHECK_THROWS_AS(shuffled_batches(one, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_rows(empty, 3, rng), std::invalid_argument);
}

}  // TEST_SUITE
