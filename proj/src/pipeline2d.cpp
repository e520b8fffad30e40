#include "grplan/pipeline2d.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "grplan/refine.hpp"
#include "grplan/unlabeled.hpp"

namespace grplan {

namespace {

bool is_identity(const Instance& ins) { return ins.starts == ins.goals; }

Plan waiting_plan(const Instance& ins) {
  Plan p;
  p.horizon = 0;
  for (const Cell& c : ins.starts) p.paths.push_back({c});
  return p;
}

// Appends virtual robots (start == goal) on free cells outside S and G
// until the instance holds `target` robots.
Instance fill_to_count(const Instance& ins, int target, uint64_t seed) {
  int extra = target - ins.num_robots();
  if (extra < 0) throw RegimeError("instance exceeds the target robot count");
  Instance out = ins;
  if (out.virtual_mask.empty()) out.virtual_mask.assign(out.starts.size(), 0);
  if (extra == 0) return out;
  std::set<int> taken;
  for (const Cell& c : ins.starts) taken.insert(ins.space.index(c));
  for (const Cell& c : ins.goals) taken.insert(ins.space.index(c));
  std::vector<Cell> candidates;
  for (int i = 0; i < ins.space.num_cells(); ++i) {
    Cell c = ins.space.cell_at(i);
    if (ins.space.is_free(c) && !taken.count(i)) candidates.push_back(c);
  }
  if (int(candidates.size()) < extra)
    throw RegimeError("not enough free cells for virtual filling");
  std::mt19937_64 rng(seed);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  for (int i = 0; i < extra; ++i) {
    out.starts.push_back(candidates[i]);
    out.goals.push_back(candidates[i]);
    out.virtual_mask.push_back(1);
  }
  return out;
}

Fragment reversed_fragment(const Fragment& f) {
  Fragment out;
  out.steps = f.steps;
  for (const auto& [robot, path] : f.paths)
    out.paths.emplace_back(robot, std::vector<Cell>(path.rbegin(), path.rend()));
  return out;
}

}  // namespace

Instance fill_virtual(const Instance& instance, double target_density, uint64_t seed) {
  instance.check();
  int target = int(target_density * instance.space.num_free() + 1e-9);
  if (target < instance.num_robots())
    throw RegimeError("instance already denser than the target");
  return fill_to_count(instance, target, seed);
}

Instance fill_virtual_to(const Instance& instance, int target_count, uint64_t seed) {
  instance.check();
  if (target_count < instance.num_robots())
    throw RegimeError("instance already denser than the target");
  return fill_to_count(instance, target_count, seed);
}

Instance transpose_instance(const Instance& instance) {
  if (instance.space.is3d()) throw StructuralError("transpose is 2D-only");
  std::vector<Cell> obstacles;
  for (const Cell& c : instance.space.obstacles()) obstacles.push_back({c.y, c.x});
  Instance out{GridSpace(instance.space.m2(), instance.space.m1(), std::move(obstacles)),
               instance.starts, instance.goals, instance.virtual_mask};
  for (Cell& c : out.starts) std::swap(c.x, c.y);
  for (Cell& c : out.goals) std::swap(c.x, c.y);
  return out;
}

Plan transpose_plan(const Plan& plan) {
  Plan out = plan;
  for (auto& path : out.paths)
    for (Cell& c : path) std::swap(c.x, c.y);
  return out;
}

// ---------------------------------------------------------------------------
// Centered-regime machinery.

namespace centered {

namespace {

int center_offset(int band_width) { return band_width == 3 ? 2 : 1; }

// Grid rows whose slot cells are free in every band. Rows beyond the last
// complete band are never usable (their band has no lane structure).
std::vector<int> valid_rows(const GridSpace& g, int band_width) {
  int bands = g.m2() / band_width;
  int usable_rows = band_width * (g.m1() / band_width);
  std::vector<int> rows;
  for (int r = 1; r <= usable_rows; ++r) {
    bool ok = true;
    for (int b = 1; b <= bands && ok; ++b)
      ok = g.is_free(Cell(r, band_width * (b - 1) + center_offset(band_width)));
    if (ok) rows.push_back(r);
  }
  return rows;
}

}  // namespace

Cell slot_cell(const AbstractSlot& s, int band_width) {
  return Cell(s.row, band_width * (s.band - 1) + center_offset(band_width));
}

std::vector<Cell> slots(const GridSpace& g, int band_width) {
  std::vector<Cell> out;
  for (int r : valid_rows(g, band_width))
    for (int b = 1; b <= g.m2() / band_width; ++b)
      out.push_back(slot_cell({r, b}, band_width));
  return out;
}

bool is_center_hole_pattern(const GridSpace& g) {
  if (g.is3d() || g.m1() % 3 || g.m2() % 3) return false;
  size_t expect = size_t(g.m1() / 3) * size_t(g.m2() / 3);
  if (g.obstacles().size() != expect) return false;
  for (const Cell& c : g.obstacles())
    if (c.x % 3 != 2 || c.y % 3 != 2) return false;
  return true;
}

Fragment rearrange_phases(const GridSpace& g, int band_width, const std::vector<int>& ids,
                      std::vector<AbstractSlot>& cur, const std::vector<AbstractSlot>& goal,
                      MatchingHeuristic matching) {
  const int k = band_width;
  const int n = int(ids.size());
  const int bands = g.m2() / k;
  std::vector<int> rows = valid_rows(g, k);
  const int m = int(rows.size());
  if (n != m * bands) throw RegimeError("centered table is not fully occupied");
  std::vector<int> row_index(g.m1() + 1, -1);
  for (int i = 0; i < m; ++i) row_index[rows[i]] = i;

  std::vector<int> cur_row(n), color(n);
  for (int j = 0; j < n; ++j) {
    if (row_index[cur[j].row] < 0 || row_index[goal[j].row] < 0)
      throw StructuralError("slot on an invalid row");
    cur_row[j] = row_index[cur[j].row];
    color[j] = row_index[goal[j].row];
  }

  // Matching picks each robot's intermediate band.
  std::vector<int> tau(n);
  if (matching == MatchingHeuristic::Hall) {
    MatchingSet ms = decompose_into_matchings(
        build_color_row_graph(m, bands, cur_row, color));
    std::vector<int> of = ms.matching_of_robot(n);
    for (int j = 0; j < n; ++j) tau[j] = of[j] + 1;
  } else {
    std::vector<std::vector<int>> cost(n, std::vector<int>(bands, 0));
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < bands; ++c) cost[j][c] = std::abs(c + 1 - goal[j].band);
    MatchingSet ms = lba_assign(m, bands, cur_row, color, cost);
    std::vector<int> of = ms.matching_of_robot(n);
    for (int j = 0; j < n; ++j) tau[j] = of[j] + 1;
  }

  std::vector<Cell> pos0(n);
  for (int j = 0; j < n; ++j) pos0[j] = slot_cell(cur[j], k);
  PlanBuilder local(pos0);

  auto band_shuffle = [&](const Band& band, const std::vector<SlotMove>& moves) {
    return k == 3 ? highway_shuffle(g, band, moves) : linear_merge_shuffle(g, band, moves);
  };
  Layout vert = k == 3 ? Layout::VerticalThird : Layout::VerticalHalf;
  Layout horiz = k == 3 ? Layout::HorizontalThird : Layout::HorizontalHalf;
  // Merge lines must be fully occupied, so half-regime bands stop at the
  // complete-band extent; highways are free to span leftover strips.
  int row_extent = k == 2 ? k * bands : g.m2();
  int col_extent = k == 2 ? k * (g.m1() / k) : g.m1();

  // Row-shuffle phase: robots move to target bands, staying on their rows.
  auto row_phase = [&](const std::vector<int>& target_band) {
    std::set<int> active;  // row-band ordinals with at least one mover
    for (int j = 0; j < n; ++j)
      if (target_band[j] != cur[j].band) active.insert((cur[j].row - 1) / k);
    if (active.empty()) return;
    std::vector<std::pair<int, Cell>> conv;
    for (int j = 0; j < n; ++j)
      if (active.count((cur[j].row - 1) / k)) conv.emplace_back(j, local.at(j));
    local.apply(convert_centered(g, vert, horiz, conv));

    Fragment merged;
    for (int a : active) {
      std::vector<SlotMove> moves;
      for (int j = 0; j < n; ++j) {
        if ((cur[j].row - 1) / k != a) continue;
        int role = (cur[j].row - 1) % k;
        moves.push_back({j, k * (cur[j].band - 1) + 1 + role,
                         k * (target_band[j] - 1) + 1 + role});
      }
      merged.merge_parallel(
          band_shuffle({Axis::Row, k * a + 1, k, row_extent}, moves));
    }
    local.apply(merged);

    conv.clear();
    for (int j = 0; j < n; ++j)
      if (active.count((cur[j].row - 1) / k)) conv.emplace_back(j, local.at(j));
    local.apply(convert_centered(g, horiz, vert, conv));
    for (int j = 0; j < n; ++j) cur[j].band = target_band[j];
  };

  // Column-shuffle phase: robots move to target rows inside their bands.
  auto col_phase = [&](const std::vector<int>& target_row) {
    bool any = false;
    for (int j = 0; j < n; ++j) any |= target_row[j] != cur[j].row;
    if (!any) return;
    Fragment merged;
    for (int b = 1; b <= bands; ++b) {
      std::vector<SlotMove> moves;
      bool band_moves = false;
      for (int j = 0; j < n; ++j) {
        if (cur[j].band != b) continue;
        moves.push_back({j, cur[j].row, target_row[j]});
        band_moves |= target_row[j] != cur[j].row;
      }
      if (!band_moves) continue;
      merged.merge_parallel(
          band_shuffle({Axis::Column, k * (b - 1) + 1, k, col_extent}, moves));
    }
    local.apply(merged);
    for (int j = 0; j < n; ++j) cur[j].row = target_row[j];
  };

  // Phase 1: rows shuffle robots to their matched bands.
  row_phase(tau);
  {
    // Each band now holds one robot of every color.
    std::vector<std::vector<int>> seen(bands + 1, std::vector<int>(m, 0));
    for (int j = 0; j < n; ++j)
      if (seen[cur[j].band][color[j]]++)
        throw SolverError("phase invariant A violated (internal)");
  }

  // Phase 2: columns deliver every robot to its goal row.
  std::vector<int> goal_rows(n);
  for (int j = 0; j < n; ++j) goal_rows[j] = goal[j].row;
  col_phase(goal_rows);
  for (int j = 0; j < n; ++j)
    if (cur[j].row != goal[j].row)
      throw SolverError("phase invariant B violated (internal)");

  // Phase 3: rows deliver every robot to its goal band.
  std::vector<int> goal_bands(n);
  for (int j = 0; j < n; ++j) goal_bands[j] = goal[j].band;
  row_phase(goal_bands);
  for (int j = 0; j < n; ++j)
    if (!(cur[j] == goal[j]))
      throw SolverError("phase invariant C violated (internal)");

  Plan motion = local.take();
  Fragment out;
  out.steps = motion.horizon;
  if (out.steps > 0)
    for (int j = 0; j < n; ++j) out.paths.emplace_back(ids[j], std::move(motion.paths[j]));
  return out;
}

}  // namespace centered

// ---------------------------------------------------------------------------
// Full density.

Fragment full_density_phases(const GridSpace& g, const std::vector<int>& ids,
                             std::vector<Cell>& cur, const std::vector<Cell>& goal,
                             const SolverOptions& options, BlockTables& tables) {
  const int n = int(ids.size());
  if (n != g.num_free() || !g.obstacles().empty())
    throw RegimeError("full-density phases need every cell occupied");
  std::vector<int> cur_row(n), color(n);
  for (int i = 0; i < n; ++i) {
    cur_row[i] = cur[i].x - 1;
    color[i] = goal[i].x - 1;
  }
  std::vector<int> tau(n);
  if (options.matching == MatchingHeuristic::Hall) {
    MatchingSet ms =
        decompose_into_matchings(build_color_row_graph(g.m1(), g.m2(), cur_row, color));
    std::vector<int> of = ms.matching_of_robot(n);
    for (int i = 0; i < n; ++i) tau[i] = of[i] + 1;
  } else {
    std::vector<std::vector<int>> cost(n, std::vector<int>(g.m2(), 0));
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < g.m2(); ++c) cost[i][c] = std::abs(c + 1 - goal[i].y);
    MatchingSet ms = lba_assign(g.m1(), g.m2(), cur_row, color, cost);
    std::vector<int> of = ms.matching_of_robot(n);
    for (int i = 0; i < n; ++i) tau[i] = of[i] + 1;
  }

  PlanBuilder local(cur);
  std::vector<Cell> target(n);

  for (int i = 0; i < n; ++i) target[i] = Cell(local.at(i).x, tau[i]);
  if (target != local.positions())
    local.apply(odd_even_shuffle(g, Axis::Row, local.positions(), target, options.mode, tables));

  for (int i = 0; i < n; ++i) target[i] = Cell(goal[i].x, local.at(i).y);
  if (target != local.positions())
    local.apply(
        odd_even_shuffle(g, Axis::Column, local.positions(), target, options.mode, tables));

  if (goal != local.positions())
    local.apply(odd_even_shuffle(g, Axis::Row, local.positions(), goal, options.mode, tables));
  if (local.positions() != goal)
    throw SolverError("full-density phases missed the goals (internal)");

  cur = local.positions();
  Plan motion = local.take();
  Fragment out;
  out.steps = motion.horizon;
  if (out.steps > 0)
    for (int i = 0; i < n; ++i) out.paths.emplace_back(ids[i], std::move(motion.paths[i]));
  return out;
}

Plan solve_grm(const Instance& instance, const SolverOptions& options, BlockTables& tables) {
  if (options.column_first) {
    SolverOptions o = options;
    o.column_first = false;
    return transpose_plan(solve_grm(transpose_instance(instance), o, tables));
  }
  instance.check();
  const GridSpace& g = instance.space;
  if (g.is3d()) throw RegimeError("solve_grm handles 2D grids");
  if (!g.obstacles().empty()) throw RegimeError("full-density regime has no obstacles");
  if (instance.num_robots() != g.num_free())
    throw RegimeError("full-density regime requires every cell occupied");
  if (g.m1() < 2 || g.m2() < 3)
    throw RegimeError("grid too small for line shuffles");
  if (is_identity(instance)) return waiting_plan(instance);

  const int n = instance.num_robots();
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<Cell> cur = instance.starts;
  PlanBuilder pb(instance.starts);
  pb.apply(full_density_phases(g, ids, cur, instance.goals, options, tables));

  Plan plan = pb.take();
  if (options.refine) plan = refine(instance, plan);
  return plan;
}

// ---------------------------------------------------------------------------
// Centered pipelines.

namespace {

Plan solve_centered(const Instance& instance, const SolverOptions& options, int band_width) {
  instance.check();
  const GridSpace& g = instance.space;
  if (g.is3d()) throw RegimeError("2D pipeline");
  if (band_width == 3) {
    if (!g.obstacles().empty() && !centered::is_center_hole_pattern(g))
      throw RegimeError("only the center-hole obstacle pattern is supported");
  } else if (!g.obstacles().empty()) {
    throw RegimeError("half-density regime does not support obstacles");
  }
  // Slots live on complete bands only; dimensions that are not band
  // multiples simply lose the leftover strip of capacity.
  std::vector<Cell> slot_cells = centered::slots(g, band_width);
  const int capacity = int(slot_cells.size());
  if (instance.num_robots() > capacity)
    throw RegimeError("robot count exceeds the regime capacity of " +
                      std::to_string(capacity));
  if (is_identity(instance)) return waiting_plan(instance);

  Instance ins = fill_to_count(instance, capacity, options.seed);
  const int n = ins.num_robots();

  std::vector<std::pair<int, Cell>> at_start(n), at_goal(n);
  for (int i = 0; i < n; ++i) {
    at_start[i] = {i, ins.starts[i]};
    at_goal[i] = {i, ins.goals[i]};
  }
  UnlabeledResult fs = solve_unlabeled(g, at_start, slot_cells);
  UnlabeledResult fg = solve_unlabeled(g, at_goal, slot_cells);

  auto to_abstract = [&](int slot) {
    const Cell& c = slot_cells[slot];
    return AbstractSlot{c.x, (c.y - 1) / band_width + 1};
  };
  std::vector<AbstractSlot> cur(n), goal(n);
  for (int i = 0; i < n; ++i) {
    cur[i] = to_abstract(fs.slot_of_robot[i]);
    goal[i] = to_abstract(fg.slot_of_robot[i]);
  }

  PlanBuilder pb(ins.starts);
  pb.apply(fs.fragment);
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  pb.apply(centered::rearrange_phases(g, band_width, ids, cur, goal, options.matching));
  pb.apply(reversed_fragment(fg.fragment));
  for (int i = 0; i < n; ++i)
    if (pb.at(i) != ins.goals[i])
      throw SolverError("pipeline missed a goal (internal)");

  Plan plan = pb.take();
  if (options.refine) plan = refine(ins, plan);
  plan.paths.resize(instance.num_robots());
  return plan;
}

}  // namespace

Plan solve_grh(const Instance& instance, const SolverOptions& options) {
  if (options.column_first) {
    SolverOptions o = options;
    o.column_first = false;
    return transpose_plan(solve_grh(transpose_instance(instance), o));
  }
  return solve_centered(instance, options, 3);
}

Plan solve_grlm(const Instance& instance, const SolverOptions& options) {
  if (options.column_first) {
    SolverOptions o = options;
    o.column_first = false;
    return transpose_plan(solve_grlm(transpose_instance(instance), o));
  }
  return solve_centered(instance, options, 2);
}

}  // namespace grplan
