#include "grplan/geometry.hpp"

#include <algorithm>
#include <queue>

namespace grplan {

GridSpace::GridSpace(int m1, int m2, std::vector<Cell> obstacles)
    : m1_(m1), m2_(m2), m3_(0) {
  init(std::move(obstacles));
}

GridSpace::GridSpace(int m1, int m2, int m3, std::vector<Cell> obstacles)
    : m1_(m1), m2_(m2), m3_(m3) {
  if (m3 < 1) throw StructuralError("3D grid needs m3 >= 1");
  init(std::move(obstacles));
}

void GridSpace::init(std::vector<Cell> obstacles) {
  if (m1_ < 1 || m2_ < 1) throw StructuralError("grid dimensions must be positive");
  std::sort(obstacles.begin(), obstacles.end());
  obstacles.erase(std::unique(obstacles.begin(), obstacles.end()), obstacles.end());
  obstacle_.assign(num_cells(), 0);
  for (const Cell& c : obstacles) {
    if (!in_bounds(c)) throw StructuralError("obstacle out of bounds");
    obstacle_[index(c)] = 1;
  }
  obstacles_ = std::move(obstacles);
  if (num_free() == 0) throw StructuralError("grid has no free cells");

  // Free-cell graph must be connected.
  Cell seed;
  for (int i = 0; i < num_cells(); ++i) {
    if (!obstacle_[i]) {
      seed = cell_at(i);
      break;
    }
  }
  std::vector<int> dist = bfs_distances({seed});
  for (int i = 0; i < num_cells(); ++i) {
    if (!obstacle_[i] && dist[i] < 0)
      throw StructuralError("free-cell graph is disconnected");
  }
}

std::vector<Cell> GridSpace::free_neighbors(const Cell& c) const {
  std::vector<Cell> out;
  out.reserve(is3d() ? 6 : 4);
  const int dx[6] = {1, -1, 0, 0, 0, 0};
  const int dy[6] = {0, 0, 1, -1, 0, 0};
  const int dz[6] = {0, 0, 0, 0, 1, -1};
  int dirs = is3d() ? 6 : 4;
  for (int d = 0; d < dirs; ++d) {
    Cell n(c.x + dx[d], c.y + dy[d], c.z + dz[d]);
    if (is_free(n)) out.push_back(n);
  }
  return out;
}

std::vector<int> GridSpace::bfs_distances(const std::vector<Cell>& sources) const {
  std::vector<int> dist(num_cells(), -1);
  std::queue<Cell> q;
  for (const Cell& s : sources) {
    if (!is_free(s)) throw StructuralError("BFS source is not a free cell");
    if (dist[index(s)] < 0) {
      dist[index(s)] = 0;
      q.push(s);
    }
  }
  while (!q.empty()) {
    Cell c = q.front();
    q.pop();
    int d = dist[index(c)];
    for (const Cell& n : free_neighbors(c)) {
      if (dist[index(n)] < 0) {
        dist[index(n)] = d + 1;
        q.push(n);
      }
    }
  }
  return dist;
}

}  // namespace grplan
