#include <doctest.h>

#include <algorithm>
#include <random>

#include "grplan/pipeline2d.hpp"
#include "grplan/unlabeled.hpp"
#include "oracles.hpp"

using namespace grplan;

namespace {

std::vector<Cell> sample_cells(const GridSpace& g, int n, std::mt19937_64& rng) {
  std::vector<Cell> cells;
  for (int i = 0; i < g.num_cells(); ++i)
    if (g.is_free(g.cell_at(i))) cells.push_back(g.cell_at(i));
  std::shuffle(cells.begin(), cells.end(), rng);
  cells.resize(n);
  return cells;
}

// Validates the fragment as a plan ending on the slot set.
void check_fragment(const GridSpace& g, const std::vector<Cell>& starts,
                    const std::vector<Cell>& slots, const UnlabeledResult& res) {
  PlanBuilder pb(starts);
  pb.apply(res.fragment);
  std::vector<Cell> ends;
  for (int i = 0; i < int(starts.size()); ++i) {
    REQUIRE(pb.at(i) == slots[res.slot_of_robot[i]]);
    ends.push_back(pb.at(i));
  }
  Instance ins{g, starts, ends, {}};
  ValidationReport report = validate_plan(ins, pb.take());
  INFO(report.summary());
  REQUIRE(report.valid);
}

}  // namespace

TEST_CASE("occupied == slots solves with horizon zero") {
  GridSpace g(5, 5);
  std::vector<std::pair<int, Cell>> robots{{0, {1, 1}}, {1, {3, 3}}};
  std::vector<Cell> slots{{1, 1}, {3, 3}};
  UnlabeledResult res = solve_unlabeled(g, robots, slots);
  CHECK(res.horizon == 0);
  CHECK(res.fragment.steps == 0);
}

TEST_CASE("swap through a corridor needs the detour the oracle finds") {
  // Two robots on a line with a single side pocket.
  GridSpace g(2, 3, std::vector<Cell>{{2, 1}, {2, 3}});
  std::vector<std::pair<int, Cell>> robots{{0, {1, 1}}, {1, {1, 3}}};
  std::vector<Cell> slots{{1, 3}, {1, 1}};
  UnlabeledResult res = solve_unlabeled(g, robots, slots);
  int oracle = oracles::joint_bfs_unlabeled(g, {{1, 1}, {1, 3}}, slots, 30);
  CHECK(res.horizon == oracle);
  check_fragment(g, {{1, 1}, {1, 3}}, slots, res);
}

TEST_CASE("horizon is optimal on 50 small instances") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    int m1 = 3 + int(rng() % 3), m2 = 3 + int(rng() % 3);
    GridSpace g(m1, m2);
    int n = 2 + int(rng() % 3);
    std::vector<Cell> starts = sample_cells(g, n, rng);
    std::vector<Cell> slots = sample_cells(g, n, rng);
    std::vector<std::pair<int, Cell>> robots;
    for (int i = 0; i < n; ++i) robots.emplace_back(i, starts[i]);
    UnlabeledResult res = solve_unlabeled(g, robots, slots);
    int oracle = oracles::joint_bfs_unlabeled(g, starts, slots, 40);
    REQUIRE(oracle >= 0);
    REQUIRE(res.horizon == oracle);
    check_fragment(g, starts, slots, res);
  }
}

TEST_CASE("flows are collision- and swap-free on denser instances") {
  std::mt19937_64 rng(5);
  GridSpace g(9, 9);
  std::vector<Cell> slots = centered::slots(g, 3);
  for (int seed = 0; seed < 5; ++seed) {
    std::vector<Cell> starts = sample_cells(g, int(slots.size()), rng);
    std::vector<std::pair<int, Cell>> robots;
    for (int i = 0; i < int(starts.size()); ++i) robots.emplace_back(i, starts[i]);
    UnlabeledResult res = solve_unlabeled(g, robots, slots);
    check_fragment(g, starts, slots, res);
  }
}

TEST_CASE("30x30 at third density lands quickly on the centered slots") {
  std::mt19937_64 rng(77);
  GridSpace g(30, 30);
  std::vector<Cell> slots = centered::slots(g, 3);
  REQUIRE(int(slots.size()) == 300);
  for (int seed = 0; seed < 6; ++seed) {
    std::vector<Cell> starts = sample_cells(g, 300, rng);
    std::vector<std::pair<int, Cell>> robots;
    for (int i = 0; i < 300; ++i) robots.emplace_back(i, starts[i]);
    UnlabeledResult res = solve_unlabeled(g, robots, slots);
    CHECK(res.horizon <= 12);
    check_fragment(g, starts, slots, res);
  }
}

TEST_CASE("assign_targets equals the permutation oracle on 4 robots") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    GridSpace g(5, 5);
    std::vector<Cell> occupied = sample_cells(g, 4, rng);
    std::vector<Cell> slots = sample_cells(g, 4, rng);
    TargetAssignment ta = assign_targets(occupied, slots, g);
    std::vector<std::vector<int>> dist(4, std::vector<int>(4));
    for (int i = 0; i < 4; ++i) {
      std::vector<int> d = g.bfs_distances({occupied[i]});
      for (int j = 0; j < 4; ++j) dist[i][j] = d[g.index(slots[j])];
    }
    REQUIRE(ta.bottleneck == oracles::enumerate_bottleneck(dist));
    std::vector<uint8_t> seen(4, 0);
    for (int s : ta.slot_of_robot) {
      REQUIRE(!seen[s]);
      seen[s] = 1;
    }
  }
}

TEST_CASE("assign_targets identity when occupied equals slots") {
  GridSpace g(4, 4);
  std::vector<Cell> cells{{1, 1}, {2, 2}, {4, 4}};
  TargetAssignment ta = assign_targets(cells, cells, g);
  CHECK(ta.bottleneck == 0);
}

TEST_CASE("size mismatch is rejected") {
  GridSpace g(4, 4);
  CHECK_THROWS_AS(assign_targets({{1, 1}}, {{1, 1}, {2, 2}}, g), StructuralError);
  std::vector<std::pair<int, Cell>> robots{{0, {1, 1}}};
  CHECK_THROWS_AS(solve_unlabeled(g, robots, {{1, 1}, {2, 2}}), StructuralError);
}

TEST_CASE("infeasible caps raise a regime error") {
  GridSpace g(3, 3);
  std::vector<std::pair<int, Cell>> robots{{0, {1, 1}}};
  CHECK_THROWS_AS(solve_unlabeled(g, robots, {{3, 3}}, -1, 2), RegimeError);
}

TEST_CASE("3D flows work under the 6-connected model") {
  std::mt19937_64 rng(9);
  GridSpace g(4, 4, 3);
  std::vector<Cell> starts = sample_cells(g, 10, rng);
  std::vector<Cell> slots = sample_cells(g, 10, rng);
  std::vector<std::pair<int, Cell>> robots;
  for (int i = 0; i < 10; ++i) robots.emplace_back(i, starts[i]);
  UnlabeledResult res = solve_unlabeled(g, robots, slots);
  check_fragment(g, starts, slots, res);
}

TEST_CASE("feasibility is monotone in the horizon") {
  std::mt19937_64 rng(55);
  GridSpace g(5, 5);
  std::vector<Cell> starts = sample_cells(g, 4, rng);
  std::vector<Cell> slots = sample_cells(g, 4, rng);
  std::vector<std::pair<int, Cell>> robots;
  for (int i = 0; i < 4; ++i) robots.emplace_back(i, starts[i]);
  UnlabeledResult best = solve_unlabeled(g, robots, slots);
  for (int extra = 1; extra <= 3; ++extra) {
    UnlabeledResult later =
        solve_unlabeled(g, robots, slots, best.horizon + extra);
    CHECK(later.horizon == best.horizon + extra);
    check_fragment(g, starts, slots, later);
  }
}
