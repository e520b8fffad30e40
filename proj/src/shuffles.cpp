#include "grplan/shuffles.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace grplan {

void Fragment::merge_parallel(Fragment other) {
  steps = std::max(steps, other.steps);
  for (auto& [robot, path] : paths)
    while (int(path.size()) < steps + 1) path.push_back(path.back());
  for (auto& [robot, path] : other.paths) {
    while (int(path.size()) < steps + 1) path.push_back(path.back());
    paths.emplace_back(robot, std::move(path));
  }
}

PlanBuilder::PlanBuilder(std::vector<Cell> start) : cur_(std::move(start)) {
  paths_.reserve(cur_.size());
  for (const Cell& c : cur_) paths_.push_back({c});
}

void PlanBuilder::apply(const Fragment& fragment) {
  if (fragment.steps == 0) return;
  std::vector<uint8_t> moved(cur_.size(), 0);
  for (const auto& [robot, path] : fragment.paths) {
    if (robot < 0 || robot >= int(cur_.size()) || moved[robot])
      throw StructuralError("fragment robot out of range or duplicated");
    if (path.front() != cur_[robot])
      throw StructuralError("fragment does not start at the robot's position");
    if (int(path.size()) != fragment.steps + 1)
      throw StructuralError("fragment path length mismatch");
    moved[robot] = 1;
    paths_[robot].insert(paths_[robot].end(), path.begin() + 1, path.end());
    cur_[robot] = path.back();
  }
  for (int i = 0; i < int(cur_.size()); ++i)
    if (!moved[i])
      paths_[i].insert(paths_[i].end(), size_t(fragment.steps), cur_[i]);
  horizon_ += fragment.steps;
}

Plan PlanBuilder::take() {
  Plan p;
  p.horizon = horizon_;
  p.paths = std::move(paths_);
  return p;
}

// ---------------------------------------------------------------------------
// Odd-even line sorting at full density.

namespace {

// Perpendicular strip heights. Fast prefers 3s (blocks stay 3x2/4x2);
// faster uses 2s so the 2x3/2x4 tables apply, with one 3-high leftover.
std::vector<int> partition_perp(int extent, OddEvenMode mode) {
  if (extent < 2) throw RegimeError("line shuffles need at least two parallel lines");
  std::vector<int> hs;
  if (mode == OddEvenMode::Fast) {
    if (extent == 2) return {2};
    if (extent == 5) return {3, 2};
    int rem = extent % 3, threes = extent / 3, fours = 0;
    if (rem == 1) {
      --threes;
      fours = 1;
    } else if (rem == 2) {
      threes -= 2;
      fours = 2;
    }
    hs.assign(size_t(threes), 3);
    hs.insert(hs.end(), size_t(fours), 4);
  } else {
    int rem = extent;
    if (rem % 2 != 0) {
      hs.push_back(3);
      rem -= 3;
    }
    hs.insert(hs.end(), size_t(rem / 2), 2);
  }
  return hs;
}

// Sorting-window widths along a line. Radix-2 strips (height 3/4) pair
// adjacent positions; height-2 strips need windows of width 3/4 so the
// blocks stay within the tabulated shapes. Width-1 windows are no-ops.
// The two parities must never split between the same pair of positions,
// otherwise that pair is never co-sorted.
std::vector<int> tile34(int length) {
  std::vector<int> ws;
  int rem = length;
  while (rem > 6) {
    ws.push_back(4);
    rem -= 4;
  }
  switch (rem) {
    case 6: ws.push_back(3); ws.push_back(3); break;
    case 5: ws.push_back(4); ws.push_back(1); break;
    case 4: ws.push_back(4); break;
    case 3: ws.push_back(3); break;
    default:
      while (rem-- > 0) ws.push_back(1);
  }
  return ws;
}

std::vector<int> tile_line(int length, bool offset, bool radix2) {
  std::vector<int> ws;
  if (radix2) {
    int pos = 1;
    if (offset) {
      ws.push_back(1);
      pos = 2;
    }
    while (pos + 1 <= length) {
      ws.push_back(2);
      pos += 2;
    }
    if (pos <= length) ws.push_back(1);
    return ws;
  }
  if (length < 3) throw RegimeError("width-3 sorting windows need line length >= 3");
  if (!offset) return tile34(length);
  ws = {1, 1};
  std::vector<int> rest = tile34(length - 2);
  ws.insert(ws.end(), rest.begin(), rest.end());
  return ws;
}

// Positions after which a tiling splits the line.
std::vector<int> boundaries_of(const std::vector<int>& widths) {
  std::vector<int> bs;
  int at = 0;
  for (size_t i = 0; i + 1 < widths.size(); ++i) {
    at += widths[i];
    bs.push_back(at);
  }
  return bs;
}

}  // namespace

Fragment odd_even_shuffle(const GridSpace& g, Axis line_axis,
                          const std::vector<Cell>& positions,
                          const std::vector<Cell>& target, OddEvenMode mode,
                          BlockTables& tables) {
  if (g.is3d()) throw StructuralError("odd_even_shuffle runs on 2D sections");
  if (positions.size() != target.size())
    throw StructuralError("positions/target length mismatch");
  const int n = int(positions.size());
  const int lines = line_axis == Axis::Row ? g.m1() : g.m2();
  const int length = line_axis == Axis::Row ? g.m2() : g.m1();
  if (n != lines * length) throw RegimeError("odd_even_shuffle requires full density");

  auto line_of = [&](const Cell& c) { return line_axis == Axis::Row ? c.x : c.y; };
  auto pos_of = [&](const Cell& c) { return line_axis == Axis::Row ? c.y : c.x; };
  auto cell_of = [&](int line, int pos) {
    return line_axis == Axis::Row ? Cell(line, pos) : Cell(pos, line);
  };

  // occupant[line-1][pos-1]; tpos = target position of each robot.
  std::vector<std::vector<int>> occ(lines, std::vector<int>(length, -1));
  std::vector<int> tpos(n);
  for (int i = 0; i < n; ++i) {
    if (line_of(positions[i]) != line_of(target[i]))
      throw StructuralError("target leaves the robot's line");
    if (occ[line_of(positions[i]) - 1][pos_of(positions[i]) - 1] >= 0)
      throw StructuralError("two robots share a cell");
    occ[line_of(positions[i]) - 1][pos_of(positions[i]) - 1] = i;
    tpos[i] = pos_of(target[i]);
  }

  std::vector<int> heights = partition_perp(lines, mode);
  struct Strip {
    int first;   // first line (1-based)
    int height;
    bool radix2;
  };
  std::vector<Strip> strips;
  int at = 1;
  for (int h : heights) {
    strips.push_back({at, h, h >= 3});
    at += h;
  }

  for (bool radix2 : {false, true}) {
    bool used = false;
    for (const Strip& s : strips) used |= s.radix2 == radix2;
    if (!used) continue;
    std::vector<int> a = boundaries_of(tile_line(length, false, radix2));
    std::vector<int> b = boundaries_of(tile_line(length, true, radix2));
    for (int cut : a)
      if (std::find(b.begin(), b.end(), cut) != b.end())
        throw SolverError("sorting-window parities share a boundary (internal)");
  }

  std::vector<std::vector<Cell>> paths(n);
  for (int i = 0; i < n; ++i) paths[i].push_back(positions[i]);
  int total_steps = 0;

  auto all_sorted = [&]() {
    for (int l = 0; l < lines; ++l)
      for (int p = 0; p < length; ++p)
        if (tpos[occ[l][p]] != p + 1) return false;
    return true;
  };

  int parity = 0, rounds = 0;
  const int round_cap = 4 * length + 16;
  while (!all_sorted()) {
    if (++rounds > round_cap) throw SolverError("line sorting did not converge");
    // Gather block jobs for this round.
    struct Job {
      int first_line, window_start, width;
      BlockSolution sol;
    };
    std::vector<Job> jobs;
    int round_len = 0;
    for (const Strip& strip : strips) {
      std::vector<int> widths = tile_line(length, parity == 1, strip.radix2);
      int pos = 1;
      for (int w : widths) {
        int a = pos;
        pos += w;
        if (w < 2) continue;
        SwapPattern pattern;
        bool identity = true;
        for (int r = 0; r < strip.height; ++r) {
          int line = strip.first + r - 1;
          // Rank occupants of the window by target position.
          std::vector<int> idx(w);
          std::iota(idx.begin(), idx.end(), 0);
          std::sort(idx.begin(), idx.end(), [&](int u, int v) {
            return tpos[occ[line][a - 1 + u]] < tpos[occ[line][a - 1 + v]];
          });
          std::vector<int> perm(w);
          for (int rank = 0; rank < w; ++rank) perm[idx[rank]] = rank;
          for (int c = 0; c < w; ++c)
            if (perm[c] != c) identity = false;
          pattern.per_row.push_back(std::move(perm));
        }
        if (identity) continue;
        BlockSolution sol = tables.solve_pattern({strip.height, w}, pattern);
        round_len = std::max(round_len, sol.length());
        jobs.push_back({strip.first, a, w, std::move(sol)});
      }
    }
    if (round_len == 0) {
      parity ^= 1;
      continue;
    }
    // Materialize the round, one parallel step at a time.
    for (int t = 0; t < round_len; ++t) {
      std::vector<std::pair<int, Cell>> dests;  // robot -> new cell
      for (const Job& job : jobs) {
        if (t >= job.sol.length()) continue;
        for (const CycleMove& cy : job.sol.steps[t].cycles) {
          int len = int(cy.cells.size());
          std::vector<int> movers(len);
          for (int k = 0; k < len; ++k) {
            int local = cy.cells[k];
            int line = job.first_line + local / job.width - 1;
            int p = job.window_start + local % job.width - 1;
            movers[k] = occ[line][p];
          }
          for (int k = 0; k < len; ++k) {
            int local = cy.cells[(k + 1) % len];
            int line = job.first_line + local / job.width - 1;
            int p = job.window_start + local % job.width - 1;
            dests.emplace_back(movers[k], cell_of(line + 1, p + 1));
          }
        }
      }
      for (auto& [robot, cell] : dests)
        occ[line_of(paths[robot].back()) - 1][pos_of(paths[robot].back()) - 1] = -1;
      for (auto& [robot, cell] : dests)
        occ[line_of(cell) - 1][pos_of(cell) - 1] = robot;
      for (int i = 0; i < n; ++i) paths[i].push_back(paths[i].back());
      for (auto& [robot, cell] : dests) paths[robot].back() = cell;
      ++total_steps;
    }
    parity ^= 1;
  }

  Fragment f;
  f.steps = total_steps;
  if (total_steps > 0)
    for (int i = 0; i < n; ++i) f.paths.emplace_back(i, std::move(paths[i]));
  return f;
}

// ---------------------------------------------------------------------------
// Highway shuffle.

Fragment highway_shuffle(const GridSpace& g, const Band& band,
                         const std::vector<SlotMove>& moves) {
  if (band.width != 3) throw StructuralError("highway bands are 3 wide");
  std::vector<int> sources, dests;
  for (const SlotMove& m : moves) {
    if (m.from < 1 || m.from > band.length || m.to < 1 || m.to > band.length)
      throw StructuralError("slot index outside the band");
    if (m.from == m.to) continue;
    sources.push_back(m.from);
    dests.push_back(m.to);
  }
  std::sort(sources.begin(), sources.end());
  std::sort(dests.begin(), dests.end());
  if (sources != dests)
    throw StructuralError("highway request is not a bijection over its slots");
  if (std::adjacent_find(sources.begin(), sources.end()) != sources.end())
    throw StructuralError("two robots on one highway slot");

  Fragment f;
  int longest = 0;
  for (const SlotMove& m : moves)
    longest = std::max(longest, std::abs(m.to - m.from));
  if (longest == 0) return f;
  f.steps = longest + 2;

  for (const SlotMove& m : moves) {
    if (m.from == m.to) continue;
    int lane = m.to < m.from ? 0 : 2;  // smaller perpendicular coordinate first
    int dir = m.to < m.from ? -1 : 1;
    std::vector<Cell> path;
    path.push_back(band.cell(1, m.from));
    for (int p = m.from; p != m.to + dir; p += dir) path.push_back(band.cell(lane, p));
    path.push_back(band.cell(1, m.to));
    for (const Cell& c : path)
      if (!g.is_free(c)) throw StructuralError("highway path crosses an obstacle");
    while (int(path.size()) < f.steps + 1) path.push_back(path.back());
    f.paths.emplace_back(m.robot, std::move(path));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Linear merge shuffle.

Fragment linear_merge_shuffle(const GridSpace& g, const Band& band,
                              const std::vector<SlotMove>& moves) {
  if (band.width != 2) throw StructuralError("linear merge bands are 2 wide");
  const int L = band.length;
  std::vector<int> robot_at(L + 1, -1);
  if (int(moves.size()) != L)
    throw RegimeError("linear merge requires a fully occupied primary line");
  std::vector<uint8_t> seen_to(L + 1, 0);
  for (const SlotMove& m : moves) {
    if (m.from < 1 || m.from > L || m.to < 1 || m.to > L)
      throw StructuralError("slot index outside the band");
    if (robot_at[m.from] >= 0 || seen_to[m.to])
      throw StructuralError("linear merge request is not a bijection");
    robot_at[m.from] = m.robot;
    seen_to[m.to] = 1;
  }

  // Tracked robots indexed by initial position; utarget = final slot.
  std::vector<std::vector<Cell>> paths(L);
  std::vector<int> path_robot(L), utarget(L);
  for (const SlotMove& m : moves) {
    paths[m.from - 1].push_back(band.cell(0, m.from));
    path_robot[m.from - 1] = m.robot;
    utarget[m.from - 1] = m.to;
  }
  std::vector<int> occ(L + 1);  // primary position -> tracked index
  for (int i = 0; i < L; ++i) occ[i + 1] = i;

  int total = 0;
  for (int s = 1; s < L; s *= 2) {
    struct MoverPlan {
      int tracked;
      int from, to;
      bool rightward;
      int up_time;  // rightward only
    };
    std::vector<MoverPlan> level;
    int duration = 0;
    for (int lo = 1; lo + s <= L; lo += 2 * s) {
      int mid = lo + s - 1;
      int hi = std::min(lo + 2 * s - 1, L);
      // Sort the block's occupants by ultimate target.
      int w = hi - lo + 1;
      std::vector<int> order(w);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return utarget[occ[lo + a]] < utarget[occ[lo + b]];
      });
      std::vector<int> dest(w);  // by block offset
      for (int rank = 0; rank < w; ++rank) dest[order[rank]] = lo + rank;
      // Leftward passes through each primary cell, for up-time safety.
      std::vector<int> last_pass(w, 0);
      for (int off = 0; off < w; ++off) {
        int from = lo + off, to = dest[off];
        if (to < from)
          for (int p = to + 1; p < from; ++p)
            last_pass[p - lo] = std::max(last_pass[p - lo], from - p);
      }
      for (int off = 0; off < w; ++off) {
        int from = lo + off, to = dest[off];
        if (to == from) continue;
        MoverPlan mp{occ[from], from, to, to > from, 0};
        if (mp.rightward) {
          mp.up_time = std::max(2 + to - from, 1 + last_pass[to - lo]);
          duration = std::max(duration, mp.up_time);
        } else {
          duration = std::max(duration, from - to);
        }
        level.push_back(mp);
      }
    }
    if (level.empty()) continue;
    // Materialize this level over `duration` steps.
    for (auto& path : paths)
      path.insert(path.end(), size_t(duration), path.back());
    for (const MoverPlan& mp : level) {
      auto& path = paths[mp.tracked];
      int base = int(path.size()) - duration - 1;  // index of time 0
      if (!mp.rightward) {
        for (int t = 1; t <= mp.from - mp.to; ++t)
          path[base + t] = band.cell(0, mp.from - t);
        for (int t = mp.from - mp.to + 1; t <= duration; ++t)
          path[base + t] = band.cell(0, mp.to);
      } else {
        for (int t = 1; t < mp.up_time; ++t)
          path[base + t] = band.cell(1, std::min(mp.from + t - 1, mp.to));
        for (int t = mp.up_time; t <= duration; ++t)
          path[base + t] = band.cell(0, mp.to);
      }
      occ[mp.to] = mp.tracked;
    }
    total += duration;
  }

  Fragment f;
  f.steps = total;
  if (total > 0) {
    for (int i = 0; i < L; ++i) {
      for (const Cell& c : paths[i])
        if (!g.is_free(c)) throw StructuralError("merge path crosses an obstacle");
      f.paths.emplace_back(path_robot[i], std::move(paths[i]));
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Centered layout conversions.

namespace {

int regime_of(Layout l) {
  return (l == Layout::VerticalThird || l == Layout::HorizontalThird) ? 3 : 2;
}

}  // namespace

Fragment convert_centered(const GridSpace& g, Layout from, Layout to,
                          const std::vector<std::pair<int, Cell>>& robots) {
  if (regime_of(from) != regime_of(to))
    throw StructuralError("layout conversion must stay within one regime");
  Fragment f;
  if (from == to) return f;
  const int k = regime_of(from);
  bool moved = false;
  std::vector<std::pair<int, std::vector<Cell>>> staged;
  for (const auto& [robot, c] : robots) {
    int rx = (c.x - 1) % k, ry = (c.y - 1) % k;
    int role;
    if (from == Layout::VerticalThird || from == Layout::VerticalHalf) {
      if (ry != (k == 3 ? 1 : 0)) throw StructuralError("robot not on a centered slot");
      role = rx;
    } else {
      if (rx != (k == 3 ? 1 : 0)) throw StructuralError("robot not on a centered slot");
      role = ry;
    }
    std::vector<Cell> path{c};
    if (k == 3) {
      if (role == 1) {
        // middle stays
      } else if (from == Layout::VerticalThird) {
        // top -> left, bottom -> right
        int dy = role == 0 ? -1 : 1;
        int dx = role == 0 ? 1 : -1;
        path.push_back(Cell(c.x, c.y + dy));
        path.push_back(Cell(c.x + dx, c.y + dy));
      } else {
        // left -> top, right -> bottom
        int dx = role == 0 ? -1 : 1;
        int dy = role == 0 ? 1 : -1;
        path.push_back(Cell(c.x + dx, c.y));
        path.push_back(Cell(c.x + dx, c.y + dy));
      }
    } else {
      if (role == 0) {
        // shared corner slot stays
      } else if (from == Layout::VerticalHalf) {
        // bottom -> right via the free corner
        path.push_back(Cell(c.x, c.y + 1));
        path.push_back(Cell(c.x - 1, c.y + 1));
      } else {
        // right -> bottom
        path.push_back(Cell(c.x + 1, c.y));
        path.push_back(Cell(c.x + 1, c.y - 1));
      }
    }
    if (path.size() > 1) moved = true;
    for (const Cell& pc : path)
      if (!g.is_free(pc)) throw StructuralError("conversion path blocked");
    staged.emplace_back(robot, std::move(path));
  }
  if (!moved) return f;
  f.steps = 2;
  for (auto& [robot, path] : staged) {
    while (int(path.size()) < 3) path.push_back(path.back());
    f.paths.emplace_back(robot, std::move(path));
  }
  return f;
}

}  // namespace grplan
