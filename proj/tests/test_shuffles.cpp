#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "grplan/shuffles.hpp"

using namespace grplan;

namespace {

BlockTables& tables() {
  static BlockTables t(BlockTables::default_cache_dir());
  return t;
}

// All cells of a 2D grid, row-major; robot i starts at cell i.
std::vector<Cell> all_cells(const GridSpace& g) {
  std::vector<Cell> cells;
  for (int i = 0; i < g.num_cells(); ++i) cells.push_back(g.cell_at(i));
  return cells;
}

Plan plan_from_fragment(const std::vector<Cell>& start, const Fragment& f) {
  PlanBuilder pb(start);
  pb.apply(f);
  return pb.take();
}

void check_valid(const GridSpace& g, const std::vector<Cell>& start, const Plan& plan,
                 const std::vector<Cell>& expect_end) {
  Instance ins{g, start, expect_end, {}};
  ValidationReport report = validate_plan(ins, plan);
  INFO(report.summary());
  REQUIRE(report.valid);
}

// Random permutation targets keeping every robot on its line.
std::vector<Cell> random_line_targets(const GridSpace& g, Axis axis,
                                      const std::vector<Cell>& cur,
                                      std::mt19937_64& rng) {
  int lines = axis == Axis::Row ? g.m1() : g.m2();
  int len = axis == Axis::Row ? g.m2() : g.m1();
  std::vector<std::vector<int>> perm(lines + 1);
  for (int l = 1; l <= lines; ++l) {
    perm[l].resize(len);
    std::iota(perm[l].begin(), perm[l].end(), 1);
    std::shuffle(perm[l].begin(), perm[l].end(), rng);
  }
  std::vector<Cell> target;
  for (const Cell& c : cur) {
    int line = axis == Axis::Row ? c.x : c.y;
    int pos = axis == Axis::Row ? c.y : c.x;
    int tpos = perm[line][pos - 1];
    target.push_back(axis == Axis::Row ? Cell(line, tpos) : Cell(tpos, line));
  }
  return target;
}

}  // namespace

TEST_CASE("odd-even: identity permutations cost zero steps") {
  GridSpace g(6, 8);
  std::vector<Cell> cur = all_cells(g);
  Fragment f = odd_even_shuffle(g, Axis::Row, cur, cur, OddEvenMode::Fast, tables());
  CHECK(f.steps == 0);
}

TEST_CASE("odd-even fast: full row reversal on 6x8 within 7*len") {
  GridSpace g(6, 8);
  std::vector<Cell> cur = all_cells(g);
  std::vector<Cell> target;
  for (const Cell& c : cur) target.push_back(Cell(c.x, g.m2() + 1 - c.y));
  Fragment f = odd_even_shuffle(g, Axis::Row, cur, target, OddEvenMode::Fast, tables());
  CHECK(f.steps <= 7 * g.m2());
  check_valid(g, cur, plan_from_fragment(cur, f), target);
}

TEST_CASE("odd-even: random permutations on assorted grids, both modes") {
  std::mt19937_64 rng(41);
  // 500 line permutations in total across the replays.
  for (int trial = 0; trial < 60; ++trial) {
    int m1 = 2 + int(rng() % 8);
    int m2 = 3 + int(rng() % 14);
    GridSpace g(m1, m2);
    std::vector<Cell> cur = all_cells(g);
    for (Axis axis : {Axis::Row, Axis::Column}) {
      int len = axis == Axis::Row ? m2 : m1;
      if (len < 3 && (axis == Axis::Row ? m1 : m2) == 2) continue;
      std::vector<Cell> target = random_line_targets(g, axis, cur, rng);
      for (OddEvenMode mode : {OddEvenMode::Fast, OddEvenMode::Faster}) {
        if (mode == OddEvenMode::Faster && len < 3) continue;
        Fragment f = odd_even_shuffle(g, axis, cur, target, mode, tables());
        REQUIRE(f.steps <= 7 * len);
        Plan p = plan_from_fragment(cur, f);
        Instance ins{g, cur, target, {}};
        REQUIRE(validate_plan(ins, p).valid);
      }
    }
  }
}

TEST_CASE("odd-even bounds: fast <= 7*len, faster <= 4*len+8 on 2-strip regions") {
  std::mt19937_64 rng(43);
  for (int len = 4; len <= 16; ++len) {
    GridSpace g(6, len);  // 6 rows: fast uses 3-strips, faster pure 2-strips
    std::vector<Cell> cur = all_cells(g);
    for (int rep = 0; rep < 8; ++rep) {
      std::vector<Cell> target = random_line_targets(g, Axis::Row, cur, rng);
      Fragment fast = odd_even_shuffle(g, Axis::Row, cur, target, OddEvenMode::Fast, tables());
      CHECK(fast.steps <= 7 * len);
      Fragment faster =
          odd_even_shuffle(g, Axis::Row, cur, target, OddEvenMode::Faster, tables());
      CHECK(faster.steps <= 4 * len + 8);
    }
    // worst case: full reversal
    std::vector<Cell> rev;
    for (const Cell& c : cur) rev.push_back(Cell(c.x, len + 1 - c.y));
    CHECK(odd_even_shuffle(g, Axis::Row, cur, rev, OddEvenMode::Fast, tables()).steps <=
          7 * len);
    CHECK(odd_even_shuffle(g, Axis::Row, cur, rev, OddEvenMode::Faster, tables()).steps <=
          4 * len + 8);
  }
}

TEST_CASE("odd-even rejects off-line targets and non-full grids") {
  GridSpace g(4, 4);
  std::vector<Cell> cur = all_cells(g);
  std::vector<Cell> target = cur;
  target[0] = Cell(2, 1);  // leaves row 1
  CHECK_THROWS_AS(odd_even_shuffle(g, Axis::Row, cur, target, OddEvenMode::Fast, tables()),
                  StructuralError);
  std::vector<Cell> some(cur.begin(), cur.end() - 1);
  CHECK_THROWS_AS(
      odd_even_shuffle(g, Axis::Row, some, some, OddEvenMode::Fast, tables()),
      RegimeError);
}

// ---------------------------------------------------------------------------

TEST_CASE("highway: identity request costs nothing") {
  GridSpace g(9, 12);
  Band band{Axis::Row, 4, 3, 12};
  CHECK(highway_shuffle(g, band, {{0, 3, 3}, {1, 7, 7}}).steps == 0);
}

TEST_CASE("highway: full reversal of a 12-slot center line") {
  GridSpace g(3, 12);
  Band band{Axis::Row, 1, 3, 12};
  std::vector<SlotMove> moves;
  std::vector<Cell> start, goal;
  for (int p = 1; p <= 12; ++p) {
    moves.push_back({p - 1, p, 13 - p});
    start.push_back(Cell(2, p));
    goal.push_back(Cell(2, 13 - p));
  }
  Fragment f = highway_shuffle(g, band, moves);
  CHECK(f.steps <= 12 + 7);
  check_valid(g, start, plan_from_fragment(start, f), goal);
}

TEST_CASE("highway: random requests on row and column bands") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    int len = 4 + int(rng() % 20);
    bool row = rng() % 2 == 0;
    GridSpace g(row ? 3 : len, row ? len : 3);
    Band band{row ? Axis::Row : Axis::Column, 1, 3, len};
    // random subset of occupied slots, permuted
    std::vector<int> slots(len);
    std::iota(slots.begin(), slots.end(), 1);
    std::shuffle(slots.begin(), slots.end(), rng);
    int occupied = 1 + int(rng() % len);
    slots.resize(occupied);
    std::vector<int> dest = slots;
    std::shuffle(dest.begin(), dest.end(), rng);
    std::vector<SlotMove> moves;
    std::vector<Cell> start, goal;
    for (int i = 0; i < occupied; ++i) {
      moves.push_back({i, slots[i], dest[i]});
      start.push_back(band.cell(1, slots[i]));
      goal.push_back(band.cell(1, dest[i]));
    }
    Fragment f = highway_shuffle(g, band, moves);
    REQUIRE(f.steps <= len + 7);
    Plan p = plan_from_fragment(start, f);
    Instance ins{g, start, goal, {}};
    REQUIRE(validate_plan(ins, p).valid);
    // confinement: all motion stays inside the band
    for (const auto& path : p.paths)
      for (const Cell& c : path) {
        int perp = row ? c.x : c.y;
        REQUIRE(perp >= band.first);
        REQUIRE(perp < band.first + 3);
      }
  }
}

TEST_CASE("highway: center-hole obstacles never block the lanes") {
  GridSpace g(9, 3, std::vector<Cell>{{2, 2}, {5, 2}, {8, 2}});
  Band band{Axis::Column, 1, 3, 9};
  // slots are the non-hole center cells; move a 2/9-density request
  std::vector<SlotMove> moves{{0, 1, 9}, {1, 9, 1}, {2, 3, 6}, {3, 6, 3}};
  std::vector<Cell> start, goal;
  for (const SlotMove& m : moves) {
    start.push_back(Cell(m.from, 2));
    goal.push_back(Cell(m.to, 2));
  }
  Fragment f = highway_shuffle(g, band, moves);
  check_valid(g, start, plan_from_fragment(start, f), goal);
}

TEST_CASE("highway rejects non-bijective requests") {
  GridSpace g(3, 8);
  Band band{Axis::Row, 1, 3, 8};
  CHECK_THROWS_AS(highway_shuffle(g, band, {{0, 1, 2}}), StructuralError);
  CHECK_THROWS_AS(highway_shuffle(g, band, {{0, 1, 3}, {1, 3, 2}}), StructuralError);
}

// ---------------------------------------------------------------------------

namespace {

void run_merge_case(int len, const std::vector<int>& dest, std::mt19937_64* rng) {
  GridSpace g(2, len);
  Band band{Axis::Row, 1, 2, len};
  std::vector<SlotMove> moves;
  std::vector<Cell> start, goal;
  for (int p = 1; p <= len; ++p) {
    moves.push_back({p - 1, p, dest[p - 1]});
    start.push_back(Cell(1, p));
    goal.push_back(Cell(1, dest[p - 1]));
  }
  Fragment f = linear_merge_shuffle(g, band, moves);
  int bound = len + 2 * (int(std::ceil(std::log2(std::max(len, 2)))) + 1) + 2;
  REQUIRE(f.steps <= bound);
  Plan p = plan_from_fragment(start, f);
  Instance ins{g, start, goal, {}};
  ValidationReport report = validate_plan(ins, p);
  INFO("len=", len, " ", report.summary());
  REQUIRE(report.valid);
  (void)rng;
}

}  // namespace

TEST_CASE("linear merge: identity costs nothing") {
  GridSpace g(2, 8);
  Band band{Axis::Row, 1, 2, 8};
  std::vector<SlotMove> moves;
  for (int p = 1; p <= 8; ++p) moves.push_back({p - 1, p, p});
  CHECK(linear_merge_shuffle(g, band, moves).steps == 0);
}

TEST_CASE("linear merge: 2x8 demonstration permutation") {
  run_merge_case(8, {5, 3, 8, 1, 7, 2, 6, 4}, nullptr);
}

TEST_CASE("linear merge: all permutations up to length 6") {
  for (int len = 1; len <= 6; ++len) {
    std::vector<int> dest(len);
    std::iota(dest.begin(), dest.end(), 1);
    do
      run_merge_case(len, dest, nullptr);
    while (std::next_permutation(dest.begin(), dest.end()));
  }
}

TEST_CASE("linear merge: random permutations at larger lengths") {
  std::mt19937_64 rng(71);
  for (int len : {8, 16, 32, 64}) {
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<int> dest(len);
      std::iota(dest.begin(), dest.end(), 1);
      std::shuffle(dest.begin(), dest.end(), rng);
      run_merge_case(len, dest, &rng);
    }
  }
}

TEST_CASE("linear merge: column bands work transposed") {
  std::mt19937_64 rng(73);
  int len = 12;
  GridSpace g(len, 2);
  Band band{Axis::Column, 1, 2, len};
  std::vector<int> dest(len);
  std::iota(dest.begin(), dest.end(), 1);
  std::shuffle(dest.begin(), dest.end(), rng);
  std::vector<SlotMove> moves;
  std::vector<Cell> start, goal;
  for (int p = 1; p <= len; ++p) {
    moves.push_back({p - 1, p, dest[p - 1]});
    start.push_back(Cell(p, 1));
    goal.push_back(Cell(dest[p - 1], 1));
  }
  Fragment f = linear_merge_shuffle(g, band, moves);
  check_valid(g, start, plan_from_fragment(start, f), goal);
}

TEST_CASE("linear merge rejects partial occupancy") {
  GridSpace g(2, 4);
  Band band{Axis::Row, 1, 2, 4};
  CHECK_THROWS_AS(linear_merge_shuffle(g, band, {{0, 1, 2}, {1, 2, 1}}), RegimeError);
}

// ---------------------------------------------------------------------------

TEST_CASE("centered conversions move cell-locally and reverse cleanly") {
  GridSpace g(9, 9);
  std::mt19937_64 rng(5);
  std::vector<std::pair<int, Cell>> robots;
  int id = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int role = 0; role < 3; ++role)
        if (rng() % 3 != 0) robots.emplace_back(id++, Cell(3 * a + role + 1, 3 * b + 2));
  std::vector<Cell> start;
  for (auto& [r, c] : robots) start.push_back(c);

  Fragment to_h = convert_centered(g, Layout::VerticalThird, Layout::HorizontalThird, robots);
  CHECK(to_h.steps <= 3);
  PlanBuilder pb(start);
  pb.apply(to_h);
  // per-cell locality
  for (int i = 0; i < int(start.size()); ++i) {
    CHECK((start[i].x - 1) / 3 == (pb.at(i).x - 1) / 3);
    CHECK((start[i].y - 1) / 3 == (pb.at(i).y - 1) / 3);
    CHECK((pb.at(i).x - 1) % 3 == 1);  // horizontal-centered now
  }
  std::vector<std::pair<int, Cell>> back;
  for (int i = 0; i < int(start.size()); ++i) back.emplace_back(i, pb.at(i));
  pb.apply(convert_centered(g, Layout::HorizontalThird, Layout::VerticalThird, back));
  for (int i = 0; i < int(start.size()); ++i) CHECK(pb.at(i) == start[i]);
  Plan p = pb.take();
  Instance ins{g, start, start, {}};
  CHECK(validate_plan(ins, p).valid);
}

TEST_CASE("centered conversion: single cell with three robots") {
  GridSpace g(3, 3);
  std::vector<std::pair<int, Cell>> robots{{0, {1, 2}}, {1, {2, 2}}, {2, {3, 2}}};
  Fragment f = convert_centered(g, Layout::VerticalThird, Layout::HorizontalThird, robots);
  CHECK(f.steps <= 3);
  std::vector<Cell> start{{1, 2}, {2, 2}, {3, 2}};
  Plan p = plan_from_fragment(start, f);
  Instance ins{g, start, {{2, 1}, {2, 2}, {2, 3}}, {}};
  CHECK(validate_plan(ins, p).valid);
}

TEST_CASE("centered conversion: identical layouts are free") {
  GridSpace g(3, 3);
  CHECK(convert_centered(g, Layout::VerticalThird, Layout::VerticalThird,
                         {{0, Cell(1, 2)}})
            .steps == 0);
}

TEST_CASE("half-regime conversion") {
  GridSpace g(4, 4);
  std::vector<std::pair<int, Cell>> robots{
      {0, {1, 1}}, {1, {2, 1}}, {2, {3, 3}}, {3, {4, 3}}};
  Fragment f = convert_centered(g, Layout::VerticalHalf, Layout::HorizontalHalf, robots);
  CHECK(f.steps <= 2);
  std::vector<Cell> start{{1, 1}, {2, 1}, {3, 3}, {4, 3}};
  Plan p = plan_from_fragment(start, f);
  Instance ins{g, start, {{1, 1}, {1, 2}, {3, 3}, {3, 4}}, {}};
  CHECK(validate_plan(ins, p).valid);
}

TEST_CASE("conversion rejects robots off the source layout") {
  GridSpace g(3, 3);
  CHECK_THROWS_AS(convert_centered(g, Layout::VerticalThird, Layout::HorizontalThird,
                                   {{0, Cell(1, 1)}}),
                  StructuralError);
  CHECK_THROWS_AS(convert_centered(g, Layout::VerticalThird, Layout::HorizontalHalf,
                                   {{0, Cell(1, 2)}}),
                  StructuralError);
}

TEST_CASE("parallel band fragments compose into a valid fragment") {
  GridSpace g(6, 10);
  Band top{Axis::Row, 1, 3, 10};
  Band bottom{Axis::Row, 4, 3, 10};
  std::vector<SlotMove> m1{{0, 1, 10}, {1, 10, 1}};
  std::vector<SlotMove> m2{{2, 2, 7}, {3, 7, 2}, {4, 4, 4}};
  Fragment f = highway_shuffle(g, top, m1);
  f.merge_parallel(highway_shuffle(g, bottom, m2));
  std::vector<Cell> start{{2, 1}, {2, 10}, {5, 2}, {5, 7}, {5, 4}};
  std::vector<Cell> goal{{2, 10}, {2, 1}, {5, 7}, {5, 2}, {5, 4}};
  check_valid(g, start, plan_from_fragment(start, f), goal);
}
