#include "grplan/unlabeled.hpp"

#include <algorithm>
#include <queue>

#include "grplan/matching.hpp"

namespace grplan {

TargetAssignment assign_targets(const std::vector<Cell>& occupied,
                                const std::vector<Cell>& slots,
                                const GridSpace& space) {
  if (occupied.size() != slots.size())
    throw StructuralError("assign_targets: set sizes differ");
  const int n = int(occupied.size());
  TargetAssignment out;
  if (n == 0) return out;
  LbaCostMatrix mat;
  mat.costs.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) {
    std::vector<int> dist = space.bfs_distances({occupied[i]});
    for (int j = 0; j < n; ++j) {
      int d = dist[space.index(slots[j])];
      if (d < 0) throw StructuralError("slot unreachable");
      mat.costs[i][j] = d;
    }
  }
  out.slot_of_robot = bottleneck_perfect_matching(mat);
  for (int i = 0; i < n; ++i)
    out.bottleneck = std::max(out.bottleneck, mat.costs[i][out.slot_of_robot[i]]);
  return out;
}

namespace {

// Unit-capacity Dinic over a CSR arc store; rev(a) == a^1.
class UnitFlow {
 public:
  // Arcs are generated twice: once to size the CSR arrays, once to fill.
  template <typename Gen>
  void build(int nodes, Gen&& generate) {
    nodes_ = nodes;
    std::vector<int> deg(nodes, 0);
    generate([&](int u, int v) {
      ++deg[u];
      ++deg[v];
    });
    head_.assign(nodes + 1, 0);
    for (int u = 0; u < nodes; ++u) head_[u + 1] = head_[u] + deg[u];
    int total = head_[nodes];
    to_.assign(total, 0);
    cap_.assign(total, 0);
    fwd_.assign(total, 0);
    arc_id_.assign(total, 0);
    std::vector<int> fill(head_.begin(), head_.end() - 1);
    generate([&](int u, int v) {
      int a = fill[u]++, b = fill[v]++;
      to_[a] = v;
      cap_[a] = 1;
      fwd_[a] = 1;
      arc_id_[a] = b;
      to_[b] = u;
      cap_[b] = 0;
      arc_id_[b] = a;
    });
  }

  int maxflow(int s, int t, int want) {
    int flow = 0;
    std::vector<int> level(nodes_), iter(nodes_);
    std::vector<int> q(nodes_);
    while (flow < want) {
      std::fill(level.begin(), level.end(), -1);
      int qh = 0, qt = 0;
      q[qt++] = s;
      level[s] = 0;
      while (qh < qt && level[t] < 0) {
        int u = q[qh++];
        for (int a = head_[u]; a < head_[u + 1]; ++a)
          if (cap_[a] > 0 && level[to_[a]] < 0) {
            level[to_[a]] = level[u] + 1;
            q[qt++] = to_[a];
          }
      }
      if (level[t] < 0) break;
      for (int u = 0; u < nodes_; ++u) iter[u] = head_[u];
      while (flow < want) {
        int pushed = dfs(s, t, level, iter);
        if (!pushed) break;
        flow += pushed;
      }
    }
    return flow;
  }

  // First outgoing arc of u that carries flow; consumes it.
  int take_flow_arc(int u) {
    for (int a = head_[u]; a < head_[u + 1]; ++a) {
      if (fwd_[a] && cap_[a] == 0) {
        cap_[a] = 1;
        cap_[arc_id_[a]] = 0;
        return to_[a];
      }
    }
    return -1;
  }

 private:
  int dfs(int u, int t, std::vector<int>& level, std::vector<int>& iter) {
    if (u == t) return 1;
    for (int& a = iter[u]; a < head_[u + 1]; ++a) {
      int v = to_[a];
      if (cap_[a] > 0 && level[v] == level[u] + 1) {
        if (dfs(v, t, level, iter)) {
          --cap_[a];
          ++cap_[arc_id_[a]];
          return 1;
        }
      }
    }
    return 0;
  }

  int nodes_ = 0;
  std::vector<int> head_, to_, arc_id_;
  std::vector<int8_t> cap_, fwd_;
};

// Node layout per time layer: [cell_in x F][cell_out x F]. The in->out arc
// caps vertex occupancy at one robot per cell per step.
struct NetLayout {
  int F = 0;
  int layer = 0, layers = 0;

  int cin(int t, int f) const { return t * layer + f; }
  int cout(int t, int f) const { return t * layer + F + f; }
  int source() const { return layers * layer; }
  int sink() const { return layers * layer + 1; }
  int nodes() const { return layers * layer + 2; }
};

// Swaps cost nothing to repair after the fact: when two extracted paths
// exchange an edge in one step, swapping their tails turns both moves into
// waits. The (cell, time) occupancy multiset is unchanged, so the repaired
// paths stay vertex-disjoint and the horizon is untouched; total movement
// drops by two per repair, which bounds the loop.
void repair_swaps(std::vector<std::vector<Cell>>& paths, const GridSpace& space) {
  if (paths.empty()) return;
  const int T = int(paths[0].size()) - 1;
  const int n = int(paths.size());
  std::vector<int> occupant(space.num_cells(), -1);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < n; ++i) occupant[space.index(paths[i][t])] = i;
    for (int i = 0; i < n; ++i) {
      const Cell& from = paths[i][t];
      const Cell& to = paths[i][t + 1];
      if (from == to) continue;
      int j = occupant[space.index(to)];
      if (j < 0 || j == i) continue;
      if (paths[j][t + 1] == from) {
        for (int s = t + 1; s <= T; ++s) std::swap(paths[i][s], paths[j][s]);
      }
    }
    for (int i = 0; i < n; ++i) occupant[space.index(paths[i][t])] = -1;
  }
}

}  // namespace

UnlabeledResult solve_unlabeled(const GridSpace& space,
                                const std::vector<std::pair<int, Cell>>& robots,
                                const std::vector<Cell>& slots,
                                int start_horizon, int horizon_cap) {
  const int n = int(robots.size());
  if (int(slots.size()) != n)
    throw StructuralError("solve_unlabeled: robot and slot counts differ");
  UnlabeledResult out;
  if (n == 0) return out;

  std::vector<Cell> occupied;
  occupied.reserve(n);
  for (const auto& [id, c] : robots) {
    if (!space.is_free(c)) throw StructuralError("robot on an obstacle");
    occupied.push_back(c);
  }
  for (const Cell& s : slots)
    if (!space.is_free(s)) throw StructuralError("slot on an obstacle");

  // Compact free-cell indexing and free edges.
  const int cells = space.num_cells();
  std::vector<int> fidx(cells, -1);
  std::vector<Cell> fcell;
  for (int i = 0; i < cells; ++i) {
    Cell c = space.cell_at(i);
    if (space.is_free(c)) {
      fidx[i] = int(fcell.size());
      fcell.push_back(c);
    }
  }
  const int F = int(fcell.size());
  std::vector<std::pair<int, int>> fedges;  // (fu, fv)
  for (int f = 0; f < F; ++f) {
    const Cell c = fcell[f];
    for (const Cell& nb : space.free_neighbors(c)) {
      int g = fidx[space.index(nb)];
      if (g > f) fedges.emplace_back(f, g);
    }
  }
  const int E = int(fedges.size());

  // Horizon lower bound: every robot reaches some slot, every slot is filled.
  std::vector<int> to_slot = space.bfs_distances(slots);
  std::vector<int> to_robot = space.bfs_distances(occupied);
  int lb = 0;
  for (const Cell& c : occupied) lb = std::max(lb, to_slot[space.index(c)]);
  for (const Cell& s : slots) lb = std::max(lb, to_robot[space.index(s)]);
  if (start_horizon >= 0) lb = std::max(lb, start_horizon);
  if (horizon_cap < 0) horizon_cap = 4 * (space.m1() + space.m2() + std::max(space.m3(), 1));

  for (int T = lb; T <= horizon_cap; ++T) {
    NetLayout net{F, 2 * F, T + 1};
    UnitFlow flow;
    auto generate = [&](auto&& emit) {
      for (int t = 0; t <= T; ++t) {
        for (int f = 0; f < F; ++f) emit(net.cin(t, f), net.cout(t, f));
        if (t == T) continue;
        for (int f = 0; f < F; ++f) emit(net.cout(t, f), net.cin(t + 1, f));
        for (int e = 0; e < E; ++e) {
          auto [u, v] = fedges[e];
          emit(net.cout(t, u), net.cin(t + 1, v));
          emit(net.cout(t, v), net.cin(t + 1, u));
        }
      }
      for (const Cell& c : occupied) emit(net.source(), net.cin(0, fidx[space.index(c)]));
      for (const Cell& s : slots) emit(net.cout(T, fidx[space.index(s)]), net.sink());
    };
    flow.build(net.nodes(), generate);
    if (flow.maxflow(net.source(), net.sink(), n) < n) continue;

    // Flow found: peel off vertex-disjoint paths and repair swaps.
    out.horizon = T;
    std::vector<int> slot_index(cells, -1);
    for (int j = 0; j < n; ++j) slot_index[space.index(slots[j])] = j;
    out.slot_of_robot.assign(n, -1);
    std::vector<std::vector<Cell>> paths(n);
    for (int i = 0; i < n; ++i) {
      std::vector<Cell>& path = paths[i];
      path.push_back(occupied[i]);
      int u = net.cin(0, fidx[space.index(occupied[i])]);
      for (int t = 0; t <= T; ++t) {
        int v = flow.take_flow_arc(u);  // cin -> cout
        if (t == T) break;
        int w = flow.take_flow_arc(v);  // cout -> cin(t+1)
        path.push_back(fcell[w - (t + 1) * net.layer]);
        u = w;
      }
    }
    repair_swaps(paths, space);
    out.fragment.steps = T;
    for (int i = 0; i < n; ++i) {
      out.slot_of_robot[i] = slot_index[space.index(paths[i].back())];
      if (out.slot_of_robot[i] < 0)
        throw SolverError("flow path did not end on a slot (internal)");
      if (T > 0) out.fragment.paths.emplace_back(robots[i].first, std::move(paths[i]));
    }
    return out;
  }
  throw RegimeError("unlabeled routing found no horizon within the cap");
}

}  // namespace grplan
