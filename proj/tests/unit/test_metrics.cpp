#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "latticegan/data.hpp"
#include "latticegan/metrics.hpp"
#include "latticegan/rng.hpp"

using namespace latticegan;

namespace {

// Exactly standardizes columns to mean 0 and (n-1)-variance 1, then shifts.
Matrix standardized_1d(std::size_t n, double shift, Rng& rng) {
  Matrix m(n, 1);
  for (double& v : m.data) v = rng.gaussian(0.0, 2.0);
  double mean = 0.0;
  for (const double v : m.data) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const double v : m.data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n - 1);
  const double sd = std::sqrt(var);
  for (double& v : m.data) v = (v - mean) / sd + shift;
  return m;
}

Matrix rotated(const Matrix& m, double angle) {
  Matrix out(m.rows, 2);
  const double c = std::cos(angle), s = std::sin(angle);
  for (std::size_t r = 0; r < m.rows; ++r) {
    out.at(r, 0) = c * m.at(r, 0) - s * m.at(r, 1);
    out.at(r, 1) = s * m.at(r, 0) + c * m.at(r, 1);
  }
  return out;
}

}  // namespace

TEST_SUITE("test_metrics") {

TEST_CASE("tvd basics") {
  CHECK(tvd(std::vector<double>{2, 5, 3}, std::vector<double>{2, 5, 3}) == doctest::Approx(0.0));
  CHECK(tvd(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == doctest::Approx(1.0));
  CHECK(tvd(std::vector<double>{3, 1}, std::vector<double>{1, 3}) == doctest::Approx(0.5));
}

TEST_CASE("tvd rejects empty, mismatched, and zero-total histograms") {
  CHECK_THROWS_AS(tvd({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(tvd(std::vector<double>{1}, std::vector<double>{1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(tvd(std::vector<double>{0, 0}, std::vector<double>{1, 2}),
                  std::invalid_argument);
}

TEST_CASE("tvd is a metric on random histogram triples") {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p(5), q(5), r(5);
    for (double& v : p) v = rng.uniform(0.0, 10.0);
    for (double& v : q) v = rng.uniform(0.0, 10.0);
    for (double& v : r) v = rng.uniform(0.0, 10.0);

    CHECK(tvd(p, q) == doctest::Approx(tvd(q, p)));
    CHECK(tvd(p, p) == doctest::Approx(0.0));
    CHECK(tvd(p, r) <= tvd(p, q) + tvd(q, r) + 1e-12);
    CHECK(tvd(p, q) >= 0.0);
    CHECK(tvd(p, q) <= 1.0);
  }
}

TEST_CASE("frechet of identical samples is zero") {
  Rng rng(2);
  const Matrix samples = sample_latent(LatentSpec{3}, 200, rng);
  CHECK(std::abs(frechet_score(samples, samples)) < 1e-9);
}

TEST_CASE("frechet closed form for a pure 1D mean shift") {
  Rng rng(3);
  const Matrix a = standardized_1d(100, 0.0, rng);
  const Matrix b = standardized_1d(100, 1.0, rng);
  CHECK(frechet_score(a, b) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("frechet closed form for equal-covariance 2D gaussians") {
  const std::size_t n = 100000;
  Matrix a(n, 2), b(n, 2);
  Rng rng(4);
  for (std::size_t r = 0; r < n; ++r) {
    a.at(r, 0) = rng.gaussian(0.0, 1.0);
    a.at(r, 1) = rng.gaussian(0.0, 1.0);
    b.at(r, 0) = rng.gaussian(3.0, 1.0);
    b.at(r, 1) = rng.gaussian(4.0, 1.0);
  }
  // ||Delta mu||^2 = 25 with matching covariances.
  CHECK(frechet_score(a, b) == doctest::Approx(25.0).epsilon(0.02));
}

TEST_CASE("frechet is symmetric and rotation invariant") {
  Rng rng(5);
  Matrix a(500, 2), b(500, 2);
  for (std::size_t r = 0; r < a.rows; ++r) {
    a.at(r, 0) = rng.gaussian(0.0, 1.0);
    a.at(r, 1) = rng.gaussian(0.0, 0.5);
    b.at(r, 0) = rng.gaussian(1.0, 0.8);
    b.at(r, 1) = rng.gaussian(-0.5, 1.2);
  }
  const double forward_score = frechet_score(a, b);
  CHECK(frechet_score(b, a) == doctest::Approx(forward_score).epsilon(1e-9));

  const double angle = 0.37;
  const double rotated_score = frechet_score(rotated(a, angle), rotated(b, angle));
  CHECK(rotated_score == doctest::Approx(forward_score).epsilon(1e-6));
}

TEST_CASE("frechet rejects too few samples") {
  Matrix a(2, 2, 0.0), b(10, 2, 0.0);
  CHECK_THROWS_AS(frechet_score(a, b), std::invalid_argument);
}

TEST_CASE("genome_l2_matrix basics") {
  const std::vector<std::vector<double>> identical = {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}};
  const Matrix zero = genome_l2_matrix(identical);
  for (const double v : zero.data) CHECK(v == 0.0);

  const std::vector<std::vector<double>> delta = {{1, 2, 3}, {1, 2, 3.25}};
  const Matrix d = genome_l2_matrix(delta);
  CHECK(d.at(0, 1) == doctest::Approx(0.25));
  CHECK(d.at(1, 0) == doctest::Approx(0.25));
  CHECK(d.at(0, 0) == 0.0);
}

TEST_CASE("genome_l2_matrix matches brute-force recomputation") {
  Rng rng(6);
  std::vector<std::vector<double>> genomes(4, std::vector<double>(7));
  for (auto& g : genomes) {
    for (double& v : g) v = rng.uniform(-2.0, 2.0);
  }
  const Matrix m = genome_l2_matrix(genomes);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 7; ++k) {
        acc += (genomes[i][k] - genomes[j][k]) * (genomes[i][k] - genomes[j][k]);
      }
      CHECK(m.at(i, j) == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
      CHECK(m.at(i, j) == m.at(j, i));
    }
  }
  CHECK(mean_pairwise_distance(m) > 0.0);
}

TEST_CASE("genome_l2_matrix satisfies the triangle inequality") {
  Rng rng(7);
  std::vector<std::vector<double>> genomes(5, std::vector<double>(6));
  for (auto& g : genomes) {
    for (double& v : g) v = rng.uniform(-1.0, 1.0);
  }
  const Matrix m = genome_l2_matrix(genomes);
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = 0; b < 5; ++b) {
      for (std::size_t c = 0; c < 5; ++c) {
        CHECK(m.at(a, c) <= m.at(a, b) + m.at(b, c) + 1e-12);
      }
    }
  }
}

TEST_CASE("genome_l2_matrix rejects mismatched architectures") {
  CHECK_THROWS_AS(genome_l2_matrix({{1, 2}, {1, 2, 3}}), std::invalid_argument);
}

TEST_CASE("mode_histogram counts exact hits") {
  const Matrix modes = ring_of_gaussians(4, 1.0);
  Matrix samples(8, 2);
  for (std::size_t r = 0; r < 8; ++r) {
    samples.at(r, 0) = modes.at(r % 4, 0);
    samples.at(r, 1) = modes.at(r % 4, 1);
  }
  const ModeHistogram hist = mode_histogram(samples, modes, 0.1);
  CHECK(hist.counts == std::vector<double>{2, 2, 2, 2});
  CHECK(hist.high_quality_fraction == doctest::Approx(1.0));
  CHECK(hist.covered_modes == 4);
}

TEST_CASE("a faraway sample is assigned but not high quality") {
  const Matrix modes = ring_of_gaussians(4, 1.0);
  Matrix sample(1, 2);
  sample.at(0, 0) = 100.0;
  sample.at(0, 1) = 0.0;
  const ModeHistogram hist = mode_histogram(sample, modes, 0.1);
  CHECK(hist.counts[0] == 1.0);
  CHECK(hist.high_quality_fraction == doctest::Approx(0.0));
  CHECK(hist.covered_modes == 0);
}

TEST_CASE("an 8-mode ring sampled at 3 sigma is fully covered") {
  const std::size_t modes = 8;
  const double sigma = 0.05;
  const Matrix centers = ring_of_gaussians(modes, 1.0);

  DataSpec spec;
  spec.source = GaussianMixtureSpec{centers, sigma};
  Rng rng(8);
  const Matrix samples = sample_real(spec, 8000, rng);

  const ModeHistogram hist = mode_histogram(samples, centers, 3.0 * sigma);
  CHECK(hist.covered_modes == modes);
  CHECK(hist.high_quality_fraction >= 0.98);
}

}  // TEST_SUITE
