#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace latticegan {

// Dense row-major matrix of doubles. Rows are samples, columns are features.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) {
    return std::span<double>(data.data() + r * cols, cols);
  }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data.data() + r * cols, cols);
  }

  bool operator==(const Matrix& other) const = default;
};

inline Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows_in) {
  if (rows_in.empty()) return Matrix{};
  Matrix m(rows_in.size(), rows_in.front().size());
  for (std::size_t r = 0; r < m.rows; ++r) {
    if (rows_in[r].size() != m.cols) {
      throw std::invalid_argument("matrix_from_rows: ragged rows");
    }
    for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = rows_in[r][c];
  }
  return m;
}

}  // namespace latticegan
