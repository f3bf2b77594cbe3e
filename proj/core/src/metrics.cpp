#include "latticegan/metrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "latticegan/nn.hpp"

namespace latticegan {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) out(static_cast<Eigen::Index>(r),
                                                 static_cast<Eigen::Index>(c)) = m.at(r, c);
  }
  return out;
}

// Matrix square root of a symmetric PSD matrix, clamping small negative
// eigenvalues from round-off to zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m, double tolerance) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("frechet_score: eigendecomposition failed");
  }
  Eigen::VectorXd eig = solver.eigenvalues();
  const double scale = std::max(1.0, std::abs(eig.maxCoeff()));
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (eig(i) < -tolerance * scale) {
      throw std::runtime_error("frechet_score: degenerate covariance beyond clamping tolerance");
    }
    eig(i) = std::sqrt(std::max(eig(i), 0.0));
  }
  return solver.eigenvectors() * eig.asDiagonal() * solver.eigenvectors().transpose();
}

}  // namespace

double tvd(std::span<const double> p, std::span<const double> q) {
  if (p.empty() || q.empty()) throw std::invalid_argument("tvd: empty histogram");
  if (p.size() != q.size()) throw std::invalid_argument("tvd: bin structures differ");
  double p_total = 0.0;
  double q_total = 0.0;
  for (const double v : p) {
    if (v < 0.0) throw std::invalid_argument("tvd: negative count");
    p_total += v;
  }
  for (const double v : q) {
    if (v < 0.0) throw std::invalid_argument("tvd: negative count");
    q_total += v;
  }
  if (p_total <= 0.0 || q_total <= 0.0) throw std::invalid_argument("tvd: histogram total is zero");

  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += std::abs(p[i] / p_total - q[i] / q_total);
  }
  return 0.5 * acc;
}

double frechet_score(const Matrix& samples_a, const Matrix& samples_b) {
  if (samples_a.cols != samples_b.cols) {
    throw std::invalid_argument("frechet_score: sample dimensions differ");
  }
  const std::size_t dim = samples_a.cols;
  if (samples_a.rows < dim + 1 || samples_b.rows < dim + 1) {
    throw std::invalid_argument("frechet_score: need at least dim+1 samples per set");
  }

  const Eigen::MatrixXd a = to_eigen(samples_a);
  const Eigen::MatrixXd b = to_eigen(samples_b);

  const Eigen::VectorXd mu_a = a.colwise().mean();
  const Eigen::VectorXd mu_b = b.colwise().mean();
  const Eigen::MatrixXd ca =
      (a.rowwise() - mu_a.transpose()).transpose() * (a.rowwise() - mu_a.transpose()) /
      static_cast<double>(samples_a.rows - 1);
  const Eigen::MatrixXd cb =
      (b.rowwise() - mu_b.transpose()).transpose() * (b.rowwise() - mu_b.transpose()) /
      static_cast<double>(samples_b.rows - 1);

  constexpr double kTolerance = 1e-10;
  const Eigen::MatrixXd ca_half = psd_sqrt(0.5 * (ca + ca.transpose()), kTolerance);
  Eigen::MatrixXd inner = ca_half * cb * ca_half;
  inner = 0.5 * (inner + inner.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(inner);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("frechet_score: eigendecomposition failed");
  }
  const Eigen::VectorXd eig = solver.eigenvalues();
  const double scale = std::max(1.0, std::abs(eig.maxCoeff()));
  double sqrt_trace = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (eig(i) < -kTolerance * scale) {
      throw std::runtime_error("frechet_score: degenerate covariance beyond clamping tolerance");
    }
    sqrt_trace += std::sqrt(std::max(eig(i), 0.0));
  }

  const double mean_term = (mu_a - mu_b).squaredNorm();
  return mean_term + ca.trace() + cb.trace() - 2.0 * sqrt_trace;
}

Matrix genome_l2_matrix(const std::vector<std::vector<double>>& genomes) {
  if (genomes.empty()) throw std::invalid_argument("genome_l2_matrix: no genomes");
  const std::size_t n = genomes.size();
  for (const auto& g : genomes) {
    if (g.size() != genomes.front().size()) {
      throw std::invalid_argument("genome_l2_matrix: mismatched parameter counts");
    }
  }
  Matrix out(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = l2_distance(genomes[i], genomes[j]);
      out.at(i, j) = d;
      out.at(j, i) = d;
    }
  }
  return out;
}

double mean_pairwise_distance(const Matrix& distance_matrix) {
  if (distance_matrix.rows != distance_matrix.cols) {
    throw std::invalid_argument("mean_pairwise_distance: matrix must be square");
  }
  const std::size_t n = distance_matrix.rows;
  if (n < 2) return 0.0;
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      acc += distance_matrix.at(i, j);
      ++count;
    }
  }
  return acc / static_cast<double>(count);
}

ModeHistogram mode_histogram(const Matrix& samples, const Matrix& modes, double threshold) {
  if (modes.rows < 1) throw std::invalid_argument("mode_histogram: need at least one mode");
  if (samples.cols != modes.cols) {
    throw std::invalid_argument("mode_histogram: sample and mode dimensions differ");
  }

  ModeHistogram hist;
  hist.counts.assign(modes.rows, 0.0);
  std::vector<bool> covered(modes.rows, false);
  std::size_t high_quality = 0;

  for (std::size_t r = 0; r < samples.rows; ++r) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < modes.rows; ++m) {
      double acc = 0.0;
      for (std::size_t c = 0; c < samples.cols; ++c) {
        const double d = samples.at(r, c) - modes.at(m, c);
        acc += d * d;
      }
      if (acc < best_dist) {
        best_dist = acc;
        best = m;
      }
    }
    hist.counts[best] += 1.0;
    if (std::sqrt(best_dist) <= threshold) {
      ++high_quality;
      covered[best] = true;
    }
  }

  hist.high_quality_fraction =
      samples.rows == 0 ? 0.0 : static_cast<double>(high_quality) / static_cast<double>(samples.rows);
  hist.covered_modes = static_cast<std::size_t>(std::count(covered.begin(), covered.end(), true));
  return hist;
}

}  // namespace latticegan
