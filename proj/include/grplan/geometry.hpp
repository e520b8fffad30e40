#pragma once

#include <cstdint>
#include <cstdlib>
#include <vector>

#include "grplan/error.hpp"

namespace grplan {

/// A grid coordinate. 1-based: x is the row in [1..m1], y the column in
/// [1..m2], z the depth in [1..m3]. On 2D grids z stays 0.
struct Cell {
  int16_t x = 0;
  int16_t y = 0;
  int16_t z = 0;

  Cell() = default;
  Cell(int x_, int y_) : x(int16_t(x_)), y(int16_t(y_)) {}
  Cell(int x_, int y_, int z_) : x(int16_t(x_)), y(int16_t(y_)), z(int16_t(z_)) {}

  bool operator==(const Cell& o) const { return x == o.x && y == o.y && z == o.z; }
  bool operator!=(const Cell& o) const { return !(*this == o); }
  bool operator<(const Cell& o) const {
    if (x != o.x) return x < o.x;
    if (y != o.y) return y < o.y;
    return z < o.z;
  }
};

inline int manhattan(const Cell& a, const Cell& b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z);
}

/// Grid workspace: dimensions plus an obstacle set. 4-connected in 2D,
/// 6-connected in 3D. Construction checks that obstacles are in bounds and
/// that the free-cell graph is connected.
class GridSpace {
 public:
  GridSpace(int m1, int m2, std::vector<Cell> obstacles = {});
  GridSpace(int m1, int m2, int m3, std::vector<Cell> obstacles = {});

  int m1() const { return m1_; }
  int m2() const { return m2_; }
  int m3() const { return m3_; }  // 0 on 2D grids
  bool is3d() const { return m3_ > 0; }

  int num_cells() const { return m1_ * m2_ * (is3d() ? m3_ : 1); }
  int num_free() const { return num_cells() - int(obstacles_.size()); }
  const std::vector<Cell>& obstacles() const { return obstacles_; }

  bool in_bounds(const Cell& c) const {
    if (c.x < 1 || c.x > m1_ || c.y < 1 || c.y > m2_) return false;
    return is3d() ? (c.z >= 1 && c.z <= m3_) : c.z == 0;
  }
  bool is_obstacle(const Cell& c) const { return obstacle_[index(c)] != 0; }
  bool is_free(const Cell& c) const { return in_bounds(c) && !is_obstacle(c); }

  /// Dense linear index, row-major with depth as the outermost stride.
  int index(const Cell& c) const {
    int base = (c.x - 1) * m2_ + (c.y - 1);
    return is3d() ? (c.z - 1) * m1_ * m2_ + base : base;
  }
  Cell cell_at(int idx) const {
    int plane = m1_ * m2_;
    int z = is3d() ? idx / plane + 1 : 0;
    int rem = is3d() ? idx % plane : idx;
    return Cell(rem / m2_ + 1, rem % m2_ + 1, z);
  }

  /// In-bounds, obstacle-free neighbors of c.
  std::vector<Cell> free_neighbors(const Cell& c) const;

  /// BFS distances over free cells from a set of sources; -1 = unreachable.
  std::vector<int> bfs_distances(const std::vector<Cell>& sources) const;

  bool operator==(const GridSpace& o) const {
    return m1_ == o.m1_ && m2_ == o.m2_ && m3_ == o.m3_ && obstacles_ == o.obstacles_;
  }

 private:
  void init(std::vector<Cell> obstacles);

  int m1_, m2_, m3_;
  std::vector<uint8_t> obstacle_;
  std::vector<Cell> obstacles_;  // sorted
};

}  // namespace grplan
