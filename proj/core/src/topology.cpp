#include "latticegan/topology.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace latticegan {

namespace {

std::size_t torus_distance(std::size_t a, std::size_t b, std::size_t n) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, n - d);
}

}  // namespace

Topology Topology::grid(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid dimensions must be >= 1");
  Topology t;
  t.kind_ = TopologyKind::Grid;
  t.rows_ = rows;
  t.cols_ = cols;
  t.cell_count_ = rows * cols;
  return t;
}

Topology Topology::ring(std::size_t size, std::size_t radius) {
  if (size < 1) throw std::invalid_argument("ring size must be >= 1");
  if (radius < 1) throw std::invalid_argument("ring radius must be >= 1");
  // Radius 1 is always allowed; larger radii must keep the offsets distinct.
  const std::size_t max_radius = std::max<std::size_t>(1, (size - 1) / 2);
  if (radius > max_radius) {
    throw std::invalid_argument("ring radius " + std::to_string(radius) +
                                " too large for size " + std::to_string(size) +
                                " (requires r <= max(1, (Z-1)/2) = " +
                                std::to_string(max_radius) + ")");
  }
  Topology t;
  t.kind_ = TopologyKind::Ring;
  t.cell_count_ = size;
  t.radius_ = radius;
  return t;
}

std::size_t Topology::subpopulation_size() const {
  return kind_ == TopologyKind::Grid ? 5 : 2 * radius_ + 1;
}

void Topology::check_cell(std::size_t cell) const {
  if (cell >= cell_count_) {
    throw std::invalid_argument("cell index " + std::to_string(cell) +
                                " out of range for population " + std::to_string(cell_count_));
  }
}

std::vector<std::size_t> Topology::neighbors(std::size_t cell) const {
  check_cell(cell);
  std::vector<std::size_t> out;
  out.push_back(cell);

  auto push_unique = [&out](std::size_t c) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };

  if (kind_ == TopologyKind::Grid) {
    const std::size_t row = cell / cols_;
    const std::size_t col = cell % cols_;
    const std::size_t north = ((row + rows_ - 1) % rows_) * cols_ + col;
    const std::size_t south = ((row + 1) % rows_) * cols_ + col;
    const std::size_t west = row * cols_ + (col + cols_ - 1) % cols_;
    const std::size_t east = row * cols_ + (col + 1) % cols_;
    push_unique(north);
    push_unique(south);
    push_unique(west);
    push_unique(east);
  } else {
    for (std::size_t k = 1; k <= radius_; ++k) {
      push_unique((cell + cell_count_ - k % cell_count_) % cell_count_);
      push_unique((cell + k) % cell_count_);
    }
  }
  return out;
}

std::size_t Topology::propagation_hops(std::size_t from, std::size_t to) const {
  check_cell(from);
  check_cell(to);
  if (kind_ == TopologyKind::Ring) {
    const std::size_t d = torus_distance(from, to, cell_count_);
    return (d + radius_ - 1) / radius_;
  }
  const std::size_t dr = torus_distance(from / cols_, to / cols_, rows_);
  const std::size_t dc = torus_distance(from % cols_, to % cols_, cols_);
  return dr + dc;
}

}  // namespace latticegan
