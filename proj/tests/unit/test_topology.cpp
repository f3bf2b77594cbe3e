#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <deque>
#include <vector>

#include "latticegan/topology.hpp"

using namespace latticegan;

namespace {

// Independent oracle: BFS distance over the neighbor graph.
std::size_t bfs_hops(const Topology& t, std::size_t from, std::size_t to) {
  std::vector<std::size_t> dist(t.cell_count(), static_cast<std::size_t>(-1));
  std::deque<std::size_t> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const std::size_t cell = queue.front();
    queue.pop_front();
    for (const std::size_t next : t.neighbors(cell)) {
      if (dist[next] == static_cast<std::size_t>(-1)) {
        dist[next] = dist[cell] + 1;
        queue.push_back(next);
      }
    }
  }
  return dist[to];
}

std::size_t grid_index(std::size_t row, std::size_t col, std::size_t cols) {
  return row * cols + col;
}

}  // namespace

TEST_SUITE("test_topology") {

TEST_CASE("grid 4x4 neighborhood of cell (1,1)") {
  const Topology t = Topology::grid(4, 4);
  const auto n = t.neighbors(grid_index(1, 1, 4));
  const std::vector<std::size_t> expected = {
      grid_index(1, 1, 4), grid_index(0, 1, 4), grid_index(2, 1, 4),
      grid_index(1, 0, 4), grid_index(1, 2, 4)};
  CHECK(n == expected);
}

TEST_CASE("ring Z=6 r=1 neighborhood of cell 0") {
  const Topology t = Topology::ring(6, 1);
  CHECK(t.neighbors(0) == std::vector<std::size_t>{0, 5, 1});
}

TEST_CASE("ring Z=6 r=2 neighborhood of cell 0") {
  const Topology t = Topology::ring(6, 2);
  CHECK(t.neighbors(0) == std::vector<std::size_t>{0, 5, 1, 4, 2});
}

TEST_CASE("degenerate grid 1x1 deduplicates to the cell itself") {
  const Topology t = Topology::grid(1, 1);
  CHECK(t.neighbors(0) == std::vector<std::size_t>{0});
}

TEST_CASE("ring Z=2 deduplicates the aliased neighbor") {
  const Topology t = Topology::ring(2, 1);
  CHECK(t.neighbors(0) == std::vector<std::size_t>{0, 1});
  CHECK(t.neighbors(1) == std::vector<std::size_t>{1, 0});
}

TEST_CASE("nominal sub-population sizes") {
  CHECK(Topology::ring(6, 1).subpopulation_size() == 3);
  CHECK(Topology::ring(6, 2).subpopulation_size() == 5);
  CHECK(Topology::grid(3, 3).subpopulation_size() == 5);
  CHECK(Topology::grid(5, 4).subpopulation_size() == 5);
}

TEST_CASE("invalid construction and cells are rejected") {
  CHECK_THROWS_AS(Topology::ring(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Topology::ring(6, 0), std::invalid_argument);
  CHECK_THROWS_AS(Topology::ring(6, 3), std::invalid_argument);
  CHECK_THROWS_AS(Topology::grid(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(Topology::grid(2, 2).neighbors(4), std::invalid_argument);
  CHECK_THROWS_AS(Topology::ring(6, 1).propagation_hops(0, 6), std::invalid_argument);
}

TEST_CASE("propagation hop counts on rings") {
  CHECK(Topology::ring(6, 1).propagation_hops(0, 3) == 3);
  CHECK(Topology::ring(6, 2).propagation_hops(0, 3) == 2);
  CHECK(Topology::ring(6, 2).propagation_hops(2, 2) == 0);
  CHECK(Topology::grid(3, 3).propagation_hops(4, 4) == 0);
}

TEST_CASE("grid hops are toroidal manhattan distances") {
  const Topology t = Topology::grid(3, 4);
  CHECK(t.propagation_hops(grid_index(0, 0, 4), grid_index(2, 3, 4)) == 1 + 1);
  CHECK(t.propagation_hops(grid_index(0, 0, 4), grid_index(1, 2, 4)) == 1 + 2);
}

TEST_CASE("neighborhoods are symmetric and regular") {
  const std::vector<Topology> topologies = {Topology::grid(3, 3), Topology::grid(4, 5),
                                            Topology::ring(7, 1), Topology::ring(9, 2),
                                            Topology::ring(11, 3)};
  for (const auto& t : topologies) {
    const std::size_t expected_size = t.neighbors(0).size();
    for (std::size_t a = 0; a < t.cell_count(); ++a) {
      const auto na = t.neighbors(a);
      CHECK(na.size() == expected_size);
      CHECK(na.front() == a);
      for (const std::size_t b : na) {
        if (b == a) continue;
        const auto nb = t.neighbors(b);
        CHECK(std::find(nb.begin(), nb.end(), a) != nb.end());
      }
    }
  }
}

TEST_CASE("ring r=2 matches the grid's four non-self neighbors") {
  CHECK(Topology::ring(9, 2).neighbors(0).size() - 1 == 4);
  CHECK(Topology::grid(3, 3).neighbors(0).size() - 1 == 4);
  CHECK(Topology::ring(9, 2).subpopulation_size() == Topology::grid(3, 3).subpopulation_size());
}

TEST_CASE("propagation_hops equals BFS distance and satisfies the triangle inequality") {
  const std::vector<Topology> topologies = {Topology::grid(3, 3), Topology::grid(2, 5),
                                            Topology::ring(6, 1), Topology::ring(6, 2),
                                            Topology::ring(10, 3)};
  for (const auto& t : topologies) {
    for (std::size_t a = 0; a < t.cell_count(); ++a) {
      for (std::size_t b = 0; b < t.cell_count(); ++b) {
        CHECK(t.propagation_hops(a, b) == bfs_hops(t, a, b));
        for (std::size_t c = 0; c < t.cell_count(); ++c) {
          CHECK(t.propagation_hops(a, c) <=
                t.propagation_hops(a, b) + t.propagation_hops(b, c));
        }
      }
    }
  }
}

}  // TEST_SUITE
