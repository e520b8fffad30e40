#include "grplan/pipeline3d.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "grplan/refine.hpp"
#include "grplan/unlabeled.hpp"

namespace grplan {

namespace {

int band_of(int y, int k) { return (y - 1) / k + 1; }
int center_col(int band, int k) { return k * (band - 1) + (k == 3 ? 2 : 1); }

// Highway permutation along one z-column of the third regime; the in-plane
// side columns of the band are the lanes (y-1 for decreasing z, y+1 for
// increasing).
Fragment z_highway(const GridSpace& g, int x, int y, const std::vector<SlotMove>& moves) {
  std::vector<int> src, dst;
  for (const SlotMove& m : moves)
    if (m.from != m.to) {
      src.push_back(m.from);
      dst.push_back(m.to);
    }
  std::sort(src.begin(), src.end());
  std::sort(dst.begin(), dst.end());
  if (src != dst) throw StructuralError("z-highway request is not a bijection");

  Fragment f;
  if (src.empty()) return f;
  int longest = 0;
  for (const SlotMove& m : moves) longest = std::max(longest, std::abs(m.to - m.from));
  f.steps = longest + 2;
  for (const SlotMove& m : moves) {
    if (m.from == m.to) continue;
    int lane_y = m.to < m.from ? y - 1 : y + 1;
    std::vector<Cell> path{Cell(x, y, m.from)};
    int dir = m.to > m.from ? 1 : -1;
    for (int z = m.from; z != m.to + dir; z += dir) path.push_back(Cell(x, lane_y, z));
    path.push_back(Cell(x, y, m.to));
    for (const Cell& c : path)
      if (!g.is_free(c)) throw StructuralError("z-highway lane blocked");
    while (int(path.size()) < f.steps + 1) path.push_back(path.back());
    f.paths.emplace_back(m.robot, std::move(path));
  }
  return f;
}

// z-permutation of one half-regime column: the slot column and its free
// lane form a 2 x m3 section, handled by the linear merge engine.
Fragment z_merge(const GridSpace& g, int x, int y, const std::vector<SlotMove>& moves) {
  GridSpace section(2, g.m3());
  Fragment f = linear_merge_shuffle(section, {Axis::Row, 1, 2, g.m3()}, moves);
  for (auto& [robot, path] : f.paths)
    for (Cell& c : path) {
      Cell lifted(x, y + c.x - 1, c.y);
      if (!g.is_free(lifted)) throw StructuralError("z-merge lane blocked");
      c = lifted;
    }
  return f;
}

Fragment lift_plane(Fragment f2d, int z) {
  for (auto& [robot, path] : f2d.paths)
    for (Cell& c : path) c.z = int16_t(z);
  return f2d;
}

bool is_identity(const Instance& ins) { return ins.starts == ins.goals; }

Plan waiting_plan(const Instance& ins) {
  Plan p;
  p.horizon = 0;
  for (const Cell& c : ins.starts) p.paths.push_back({c});
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------

MatchingXy matching_xy(const GridSpace& g, const std::vector<int>& ids,
                       std::vector<Cell>& cur, const std::vector<Cell>& goal,
                       MatchingHeuristic matching) {
  const int k = 3;
  const int n = int(ids.size());
  std::map<std::pair<int, int>, int> class_index;
  for (int j = 0; j < n; ++j) {
    if ((cur[j].y - 1) % k != center_col(1, k) - 1)
      throw StructuralError("robot not on a centered slot column");
    class_index.emplace(std::make_pair(int(cur[j].x), int(cur[j].y)),
                        int(class_index.size()));
  }
  const int classes = int(class_index.size());
  if (classes == 0 || n != classes * g.m3())
    throw RegimeError("z-columns over centered slots must be fully occupied");

  auto class_of = [&](const Cell& c) {
    auto it = class_index.find({int(c.x), int(c.y)});
    if (it == class_index.end())
      throw StructuralError("robot not on a centered slot column");
    return it->second;
  };
  std::vector<int> cur_class(n), goal_class(n);
  for (int j = 0; j < n; ++j) {
    cur_class[j] = class_of(cur[j]);
    goal_class[j] = class_of(goal[j]);
  }

  MatchingXy out;
  out.depth_of_robot.assign(n, 0);
  if (matching == MatchingHeuristic::Hall) {
    MatchingSet ms = decompose_into_matchings(
        build_color_row_graph(classes, g.m3(), cur_class, goal_class));
    std::vector<int> of = ms.matching_of_robot(n);
    for (int j = 0; j < n; ++j) out.depth_of_robot[j] = of[j] + 1;
  } else {
    std::vector<std::vector<int>> cost(n, std::vector<int>(g.m3(), 0));
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < g.m3(); ++c) cost[j][c] = std::abs(c + 1 - goal[j].z);
    MatchingSet ms = lba_assign(classes, g.m3(), cur_class, goal_class, cost);
    std::vector<int> of = ms.matching_of_robot(n);
    for (int j = 0; j < n; ++j) out.depth_of_robot[j] = of[j] + 1;
  }

  // One robot per (column, depth): realize with parallel z-highways.
  std::map<std::pair<int, int>, std::vector<SlotMove>> per_column;
  for (int j = 0; j < n; ++j)
    per_column[{cur[j].x, cur[j].y}].push_back({j, cur[j].z, out.depth_of_robot[j]});
  for (auto& [xy, moves] : per_column) {
    Fragment f = z_highway(g, xy.first, xy.second, moves);
    for (auto& [local, path] : f.paths) local = ids[local];
    out.fragment.merge_parallel(std::move(f));
  }
  for (int j = 0; j < n; ++j) cur[j].z = int16_t(out.depth_of_robot[j]);

  // Every plane now holds each goal class exactly once.
  std::vector<std::set<int>> seen(g.m3() + 1);
  for (int j = 0; j < n; ++j)
    if (!seen[cur[j].z].insert(goal_class[j]).second)
      throw SolverError("plane class invariant violated (internal)");
  return out;
}

Fragment xy_fitting(const GridSpace& g, const std::vector<int>& ids,
                    std::vector<Cell>& cur, const std::vector<Cell>& goal,
                    MatchingHeuristic matching) {
  const int k = 3;
  const int n = int(ids.size());
  GridSpace plane_grid(g.m1(), g.m2());
  Fragment merged;
  for (int z = 1; z <= g.m3(); ++z) {
    std::vector<int> members;
    for (int j = 0; j < n; ++j)
      if (cur[j].z == z) members.push_back(j);
    if (members.empty()) continue;
    std::vector<int> frag_ids;
    std::vector<AbstractSlot> cur2, goal2;
    for (int j : members) {
      frag_ids.push_back(ids[j]);
      cur2.push_back({cur[j].x, band_of(cur[j].y, k)});
      goal2.push_back({goal[j].x, band_of(goal[j].y, k)});
    }
    Fragment f = centered::rearrange_phases(plane_grid, k, frag_ids, cur2, goal2, matching);
    merged.merge_parallel(lift_plane(std::move(f), z));
    for (size_t idx = 0; idx < members.size(); ++idx) {
      cur[members[idx]].x = int16_t(cur2[idx].row);
      cur[members[idx]].y = int16_t(center_col(cur2[idx].band, k));
    }
  }
  return merged;
}

// ---------------------------------------------------------------------------

namespace {

// Shared scaffold of the centered 3D pipelines (third and half regimes).
Plan solve_centered_3d(const Instance& instance, const SolverOptions& options, int k) {
  instance.check();
  const GridSpace& g = instance.space;
  if (!g.is3d()) throw RegimeError("3D pipeline needs a 3D grid");
  if (!g.obstacles().empty()) throw RegimeError("3D pipelines do not support obstacles");

  // In-plane slots on complete bands only; m3 needs no partitioning.
  std::vector<Cell> slot_cells;
  for (int z = 1; z <= g.m3(); ++z)
    for (int x = 1; x <= k * (g.m1() / k); ++x)
      for (int b = 1; b <= g.m2() / k; ++b)
        slot_cells.push_back(Cell(x, center_col(b, k), z));
  const int capacity = int(slot_cells.size());
  if (instance.num_robots() > capacity)
    throw RegimeError("robot count exceeds the regime capacity of " +
                      std::to_string(capacity));
  if (is_identity(instance)) return waiting_plan(instance);

  Instance ins = fill_virtual_to(instance, capacity, options.seed);
  const int n = ins.num_robots();

  std::vector<std::pair<int, Cell>> at_start(n), at_goal(n);
  for (int i = 0; i < n; ++i) {
    at_start[i] = {i, ins.starts[i]};
    at_goal[i] = {i, ins.goals[i]};
  }
  UnlabeledResult fs = solve_unlabeled(g, at_start, slot_cells);
  UnlabeledResult fg = solve_unlabeled(g, at_goal, slot_cells);

  std::vector<Cell> cur(n), goal(n);
  for (int i = 0; i < n; ++i) {
    cur[i] = slot_cells[fs.slot_of_robot[i]];
    goal[i] = slot_cells[fg.slot_of_robot[i]];
  }
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);

  PlanBuilder pb(ins.starts);
  pb.apply(fs.fragment);

  if (k == 3) {
    MatchingXy mx = matching_xy(g, ids, cur, goal, options.matching);
    pb.apply(mx.fragment);
    pb.apply(xy_fitting(g, ids, cur, goal, options.matching));
  } else {
    // Half regime: same structure with the merge engine doing the z work
    // through each band's free side column.
    std::map<std::pair<int, int>, int> class_index;
    for (int j = 0; j < n; ++j)
      class_index.emplace(std::make_pair(int(cur[j].x), int(cur[j].y)),
                          int(class_index.size()));
    const int classes = int(class_index.size());
    if (classes == 0 || n != classes * g.m3())
      throw RegimeError("z-columns must be fully occupied");
    std::vector<int> cur_class(n), goal_class(n);
    for (int j = 0; j < n; ++j) {
      cur_class[j] = class_index.at({int(cur[j].x), int(cur[j].y)});
      goal_class[j] = class_index.at({int(goal[j].x), int(goal[j].y)});
    }
    MatchingSet ms = decompose_into_matchings(
        build_color_row_graph(classes, g.m3(), cur_class, goal_class));
    std::vector<int> depth = ms.matching_of_robot(n);
    std::map<std::pair<int, int>, std::vector<SlotMove>> per_column;
    for (int j = 0; j < n; ++j)
      per_column[{cur[j].x, cur[j].y}].push_back({j, cur[j].z, depth[j] + 1});
    Fragment zf;
    for (auto& [xy, mv] : per_column) {
      Fragment f = z_merge(g, xy.first, xy.second, mv);
      for (auto& [local, path] : f.paths) local = ids[local];
      zf.merge_parallel(std::move(f));
    }
    pb.apply(zf);
    for (int j = 0; j < n; ++j) cur[j].z = int16_t(depth[j] + 1);

    GridSpace plane_grid(g.m1(), g.m2());
    Fragment fitting;
    for (int z = 1; z <= g.m3(); ++z) {
      std::vector<int> members, frag_ids;
      std::vector<AbstractSlot> cur2, goal2;
      for (int j = 0; j < n; ++j)
        if (cur[j].z == z) {
          members.push_back(j);
          frag_ids.push_back(ids[j]);
          cur2.push_back({cur[j].x, band_of(cur[j].y, k)});
          goal2.push_back({goal[j].x, band_of(goal[j].y, k)});
        }
      Fragment f = centered::rearrange_phases(plane_grid, k, frag_ids, cur2, goal2,
                                          options.matching);
      fitting.merge_parallel(lift_plane(std::move(f), z));
      for (size_t idx = 0; idx < members.size(); ++idx) {
        cur[members[idx]].x = int16_t(cur2[idx].row);
        cur[members[idx]].y = int16_t(center_col(cur2[idx].band, k));
      }
    }
    pb.apply(fitting);
  }

  // z-fitting: within every column, robots take their goal depths.
  {
    std::map<std::pair<int, int>, std::vector<SlotMove>> per_column;
    for (int j = 0; j < n; ++j)
      per_column[{cur[j].x, cur[j].y}].push_back({j, cur[j].z, goal[j].z});
    Fragment zf;
    for (auto& [xy, mv] : per_column) {
      Fragment f = k == 3 ? z_highway(g, xy.first, xy.second, mv)
                          : z_merge(g, xy.first, xy.second, mv);
      for (auto& [local, path] : f.paths) local = ids[local];
      zf.merge_parallel(std::move(f));
    }
    pb.apply(zf);
    for (int j = 0; j < n; ++j) cur[j].z = goal[j].z;
  }
  for (int j = 0; j < n; ++j)
    if (cur[j] != goal[j]) throw SolverError("3D fitting missed a slot (internal)");

  Fragment rg;
  rg.steps = fg.fragment.steps;
  for (const auto& [robot, path] : fg.fragment.paths)
    rg.paths.emplace_back(robot, std::vector<Cell>(path.rbegin(), path.rend()));
  pb.apply(rg);
  for (int i = 0; i < n; ++i)
    if (pb.at(i) != ins.goals[i]) throw SolverError("3D pipeline missed a goal (internal)");

  Plan plan = pb.take();
  if (options.refine) plan = refine(ins, plan);
  plan.paths.resize(instance.num_robots());
  return plan;
}

}  // namespace

Plan solve_grh3d(const Instance& instance, const SolverOptions& options) {
  return solve_centered_3d(instance, options, 3);
}

Plan solve_grlm3d(const Instance& instance, const SolverOptions& options) {
  return solve_centered_3d(instance, options, 2);
}

// ---------------------------------------------------------------------------

Plan solve_grm3d(const Instance& instance, const SolverOptions& options, BlockTables& tables) {
  instance.check();
  const GridSpace& g = instance.space;
  if (!g.is3d()) throw RegimeError("3D pipeline needs a 3D grid");
  if (!g.obstacles().empty()) throw RegimeError("full-density regime has no obstacles");
  if (instance.num_robots() != g.num_free())
    throw RegimeError("full-density regime requires every cell occupied");
  if (is_identity(instance)) return waiting_plan(instance);

  const int n = instance.num_robots();
  const int classes = g.m1() * g.m2();
  auto class_of = [&](const Cell& c) { return (c.x - 1) * g.m2() + (c.y - 1); };

  std::vector<Cell> cur = instance.starts;
  PlanBuilder pb(instance.starts);

  // Phase 1: matchings over (x,y) classes, realized as z odd-even shuffles
  // section by section (fixed y, lines along z banded by x).
  std::vector<int> depth(n, 1);
  if (g.m3() > 1) {
    std::vector<int> cur_class(n), goal_class(n);
    for (int i = 0; i < n; ++i) {
      cur_class[i] = class_of(cur[i]);
      goal_class[i] = class_of(instance.goals[i]);
    }
    MatchingSet ms = decompose_into_matchings(
        build_color_row_graph(classes, g.m3(), cur_class, goal_class));
    std::vector<int> of = ms.matching_of_robot(n);
    for (int i = 0; i < n; ++i) depth[i] = of[i] + 1;

    auto run_z_phase = [&](const std::vector<int>& target_z) {
      GridSpace section(g.m1(), g.m3());
      Fragment all;
      for (int y = 1; y <= g.m2(); ++y) {
        std::vector<int> members;
        std::vector<Cell> pos2, tgt2;
        for (int i = 0; i < n; ++i)
          if (cur[i].y == y) {
            members.push_back(i);
            pos2.push_back(Cell(cur[i].x, cur[i].z));
            tgt2.push_back(Cell(cur[i].x, target_z[i]));
          }
        if (pos2 == tgt2) continue;
        Fragment f = odd_even_shuffle(section, Axis::Row, pos2, tgt2, options.mode, tables);
        // lift section cells (x, z) back into the grid at this y
        for (auto& [local, path] : f.paths) {
          for (Cell& c : path) c = Cell(c.x, y, c.y);
          local = members[local];
        }
        all.merge_parallel(std::move(f));
      }
      pb.apply(all);
      for (int i = 0; i < n; ++i) cur[i].z = int16_t(target_z[i]);
    };
    run_z_phase(depth);
  }

  // Phase 2: full-density 2D fitting inside every plane.
  {
    GridSpace plane_grid(g.m1(), g.m2());
    Fragment fitting;
    for (int z = 1; z <= g.m3(); ++z) {
      std::vector<int> members;
      std::vector<Cell> cur2, goal2;
      for (int i = 0; i < n; ++i)
        if (cur[i].z == z) {
          members.push_back(i);
          cur2.push_back(Cell(cur[i].x, cur[i].y));
          goal2.push_back(Cell(instance.goals[i].x, instance.goals[i].y));
        }
      if (cur2 == goal2) continue;
      Fragment f = full_density_phases(plane_grid, members, cur2, goal2, options, tables);
      fitting.merge_parallel(lift_plane(std::move(f), z));
      for (size_t idx = 0; idx < members.size(); ++idx) {
        cur[members[idx]].x = cur2[idx].x;
        cur[members[idx]].y = cur2[idx].y;
      }
    }
    pb.apply(fitting);
  }

  // Phase 3: z shuffles to the goal depths.
  if (g.m3() > 1) {
    std::vector<int> target_z(n);
    for (int i = 0; i < n; ++i) target_z[i] = instance.goals[i].z;
    GridSpace section(g.m1(), g.m3());
    Fragment all;
    for (int y = 1; y <= g.m2(); ++y) {
      std::vector<int> members;
      std::vector<Cell> pos2, tgt2;
      for (int i = 0; i < n; ++i)
        if (cur[i].y == y) {
          members.push_back(i);
          pos2.push_back(Cell(cur[i].x, cur[i].z));
          tgt2.push_back(Cell(cur[i].x, target_z[i]));
        }
      if (pos2 == tgt2) continue;
      Fragment f = odd_even_shuffle(section, Axis::Row, pos2, tgt2, options.mode, tables);
      for (auto& [local, path] : f.paths) {
        for (Cell& c : path) c = Cell(c.x, y, c.y);
        local = members[local];
      }
      all.merge_parallel(std::move(f));
    }
    pb.apply(all);
    for (int i = 0; i < n; ++i) cur[i].z = int16_t(target_z[i]);
  }

  for (int i = 0; i < n; ++i)
    if (cur[i] != instance.goals[i])
      throw SolverError("3D full-density pipeline missed a goal (internal)");

  Plan plan = pb.take();
  if (options.refine) plan = refine(instance, plan);
  return plan;
}

}  // namespace grplan
