#pragma once

#include <cstddef>
#include <vector>

namespace latticegan {

enum class TopologyKind { Grid, Ring };

// Cell adjacency for the two spatial layouts: a 2D toroidal grid with Von
// Neumann radius-1 neighborhoods, or a ring of Z cells with radius r.
// Immutable after construction.
class Topology {
 public:
  static Topology grid(std::size_t rows, std::size_t cols);
  static Topology ring(std::size_t size, std::size_t radius);

  TopologyKind kind() const { return kind_; }
  std::size_t cell_count() const { return cell_count_; }
  std::size_t grid_rows() const { return rows_; }
  std::size_t grid_cols() const { return cols_; }
  std::size_t ring_radius() const { return radius_; }

  // Nominal sub-population size: 5 for the grid, 2r+1 for the ring. Small
  // layouts may yield fewer distinct neighbors (see neighbors()).
  std::size_t subpopulation_size() const;

  // Ordered neighborhood of a cell. The cell itself comes first; the grid
  // order is [self, N, S, W, E], the ring order [self, -1, +1, ..., -r, +r],
  // all with wraparound. Aliased cells in degenerate layouts are
  // deduplicated, keeping the first occurrence.
  std::vector<std::size_t> neighbors(std::size_t cell) const;

  // Minimum number of generations for an update at `from` to reach `to`:
  // graph distance in the neighbor graph.
  std::size_t propagation_hops(std::size_t from, std::size_t to) const;

  bool operator==(const Topology&) const = default;

 private:
  Topology() = default;

  void check_cell(std::size_t cell) const;

  TopologyKind kind_ = TopologyKind::Grid;
  std::size_t cell_count_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t radius_ = 0;
};

}  // namespace latticegan
