#include "grplan/scenario.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace grplan {

std::string InstanceSpec::canonical() const {
  std::ostringstream os;
  os << m1 << "x" << m2;
  if (m3 > 0) os << "x" << m3;
  os << "|d=" << density << "|o=" << int(obstacles) << "|s=" << int(scenario)
     << "|seed=" << seed;
  return os.str();
}

std::string spec_digest(const InstanceSpec& spec) {
  // FNV-1a 64
  uint64_t h = 1469598103934665603ull;
  for (char c : spec.canonical()) {
    h ^= uint64_t(uint8_t(c));
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

namespace {

GridSpace make_space(const InstanceSpec& spec) {
  std::vector<Cell> obstacles;
  if (spec.obstacles == ObstaclePattern::CenterHole) {
    if (spec.m3 > 0) throw RegimeError("center-hole pattern is 2D");
    if (spec.m1 % 3 || spec.m2 % 3)
      throw RegimeError("center-hole pattern needs dimensions divisible by 3");
    for (int x = 2; x <= spec.m1; x += 3)
      for (int y = 2; y <= spec.m2; y += 3) obstacles.push_back(Cell(x, y));
  }
  return spec.m3 > 0 ? GridSpace(spec.m1, spec.m2, spec.m3, std::move(obstacles))
                     : GridSpace(spec.m1, spec.m2, std::move(obstacles));
}

std::vector<Cell> free_cells(const GridSpace& g) {
  std::vector<Cell> cells;
  for (int i = 0; i < g.num_cells(); ++i) {
    Cell c = g.cell_at(i);
    if (g.is_free(c)) cells.push_back(c);
  }
  return cells;
}

Instance generate_random(const GridSpace& g, int n, std::mt19937_64& rng) {
  std::vector<Cell> cells = free_cells(g);
  std::shuffle(cells.begin(), cells.end(), rng);
  std::vector<Cell> starts(cells.begin(), cells.begin() + n);
  std::shuffle(cells.begin(), cells.end(), rng);
  std::vector<Cell> goals(cells.begin(), cells.begin() + n);
  return {g, std::move(starts), std::move(goals), {}};
}

Instance generate_squares(const GridSpace& g, int n, std::mt19937_64&) {
  if (g.is3d()) throw RegimeError("squares scenario is 2D");
  std::vector<Cell> cells = free_cells(g);
  // Outermost rings first; canonical order inside a ring.
  std::stable_sort(cells.begin(), cells.end(), [&](const Cell& a, const Cell& b) {
    auto ring = [&](const Cell& c) {
      return std::min(std::min(int(c.x) - 1, int(c.y) - 1),
                      std::min(g.m1() - c.x, g.m2() - c.y));
    };
    return ring(a) < ring(b);
  });
  std::vector<Cell> starts(cells.begin(), cells.begin() + n), goals;
  for (const Cell& c : starts)
    goals.push_back(Cell(g.m1() + 1 - c.x, g.m2() + 1 - c.y));
  return {g, std::move(starts), std::move(goals), {}};
}

Instance generate_blocks(const GridSpace& g, double density, std::mt19937_64& rng) {
  if (g.is3d()) throw RegimeError("blocks scenario is 2D");
  const int k = 3;  // 3x3-multiple blocks keep every regime applicable
  if (g.m1() % k || g.m2() % k)
    throw RegimeError("blocks scenario needs dimensions divisible by 3");
  int bx = g.m1() / k, by = g.m2() / k;
  int nblocks = bx * by;

  // Free local offsets are identical across blocks for the supported
  // obstacle patterns.
  std::vector<int> offsets;
  for (int ox = 0; ox < k; ++ox)
    for (int oy = 0; oy < k; ++oy)
      if (g.is_free(Cell(ox + 1, oy + 1))) offsets.push_back(ox * k + oy);
  int per_block = int(density * double(offsets.size()) + 1e-9);
  if (per_block < 1) per_block = 0;

  std::vector<int> sigma(nblocks);
  for (int b = 0; b < nblocks; ++b) sigma[b] = b;
  std::shuffle(sigma.begin(), sigma.end(), rng);

  std::vector<Cell> starts, goals;
  auto block_cell = [&](int block, int offset) {
    int bx0 = (block / by) * k, by0 = (block % by) * k;
    return Cell(bx0 + offset / k + 1, by0 + offset % k + 1);
  };
  for (int b = 0; b < nblocks; ++b) {
    std::vector<int> pick = offsets;
    std::shuffle(pick.begin(), pick.end(), rng);
    pick.resize(per_block);
    std::sort(pick.begin(), pick.end());  // sorted-order assignment in-block
    for (int off : pick) {
      starts.push_back(block_cell(b, off));
      goals.push_back(block_cell(sigma[b], off));
    }
  }
  return {g, std::move(starts), std::move(goals), {}};
}

}  // namespace

Instance generate(const InstanceSpec& spec) {
  GridSpace g = make_space(spec);
  if (spec.density < 0.0 || spec.density > 1.0)
    throw RegimeError("density must be in [0, 1]");
  int n = int(spec.density * g.num_free() + 1e-9);
  std::mt19937_64 rng(spec.seed);
  Instance ins =
      spec.scenario == Scenario::Random    ? generate_random(g, n, rng)
      : spec.scenario == Scenario::Squares ? generate_squares(g, n, rng)
                                           : generate_blocks(g, spec.density, rng);
  ins.check();
  return ins;
}

}  // namespace grplan
