#include "grplan/matching.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace grplan {

ColorRowMultigraph build_color_row_graph(int rows_count, int width,
                                         const std::vector<int>& row_of_robot,
                                         const std::vector<int>& color_of_robot) {
  if (row_of_robot.size() != color_of_robot.size())
    throw StructuralError("row/color arrays differ in length");
  if (int(row_of_robot.size()) != rows_count * width)
    throw RegimeError("abstract table is not fully occupied");

  ColorRowMultigraph g;
  g.side = rows_count;
  g.degree = width;
  g.edges.reserve(row_of_robot.size());
  std::vector<int> row_deg(rows_count, 0), color_deg(rows_count, 0);
  for (int i = 0; i < int(row_of_robot.size()); ++i) {
    int r = row_of_robot[i], t = color_of_robot[i];
    if (r < 0 || r >= rows_count || t < 0 || t >= rows_count)
      throw StructuralError("row or color index out of range");
    ++row_deg[r];
    ++color_deg[t];
    g.edges.push_back({t, r, i});
  }
  for (int r = 0; r < rows_count; ++r)
    if (row_deg[r] != width || color_deg[r] != width)
      throw RegimeError("color multiplicities are not width-regular");
  // Deterministic edge order: (row, color, robot).
  std::sort(g.edges.begin(), g.edges.end(), [](const MultigraphEdge& a, const MultigraphEdge& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.color != b.color) return a.color < b.color;
    return a.robot < b.robot;
  });
  return g;
}

std::vector<int> MatchingSet::matching_of_robot(int robots) const {
  std::vector<int> out(robots, -1);
  for (int c = 0; c < int(matchings.size()); ++c)
    for (const MultigraphEdge& e : matchings[c]) out[e.robot] = c;
  return out;
}

namespace {

// Kuhn augmenting-path matching over the edges whose `alive` flag is set.
// adj[row] lists edge indices. match_row/match_color store edge indices.
struct KuhnState {
  const std::vector<MultigraphEdge>& edges;
  const std::vector<std::vector<int>>& adj;
  const std::vector<uint8_t>& alive;
  std::vector<int> match_row, match_color;
  std::vector<uint8_t> visited;

  KuhnState(int side, const std::vector<MultigraphEdge>& edges,
            const std::vector<std::vector<int>>& adj, const std::vector<uint8_t>& alive)
      : edges(edges), adj(adj), alive(alive), match_row(side, -1),
        match_color(side, -1), visited(side, 0) {}

  bool augment(int row) {
    for (int ei : adj[row]) {
      if (!alive[ei]) continue;
      int t = edges[ei].color;
      if (visited[t]) continue;
      visited[t] = 1;
      if (match_color[t] < 0 || augment(edges[match_color[t]].row)) {
        match_color[t] = ei;
        match_row[row] = ei;
        return true;
      }
    }
    return false;
  }

  // Returns matched row count.
  int run() {
    int matched = 0;
    for (int r = 0; r < int(match_row.size()); ++r) {
      if (match_row[r] >= 0) {
        ++matched;
        continue;
      }
      std::fill(visited.begin(), visited.end(), 0);
      if (augment(r)) ++matched;
    }
    return matched;
  }
};

}  // namespace

MatchingSet decompose_into_matchings(const ColorRowMultigraph& graph) {
  const int m = graph.side;
  std::vector<int> row_deg(m, 0), color_deg(m, 0);
  for (const MultigraphEdge& e : graph.edges) {
    ++row_deg[e.row];
    ++color_deg[e.color];
  }
  for (int r = 0; r < m; ++r)
    if (row_deg[r] != graph.degree || color_deg[r] != graph.degree)
      throw RegimeError("decompose_into_matchings: graph is not d-regular");
  if (graph.degree < 1) throw RegimeError("degree must be >= 1");

  std::vector<std::vector<int>> adj(m);
  for (int ei = 0; ei < int(graph.edges.size()); ++ei)
    adj[graph.edges[ei].row].push_back(ei);

  std::vector<uint8_t> alive(graph.edges.size(), 1);
  MatchingSet out;
  out.matchings.resize(graph.degree);
  for (int c = 0; c < graph.degree; ++c) {
    KuhnState kuhn(m, graph.edges, adj, alive);
    if (kuhn.run() != m)
      throw RegimeError("residual graph lost regularity (internal)");
    for (int r = 0; r < m; ++r) {
      int ei = kuhn.match_row[r];
      alive[ei] = 0;
      out.matchings[c].push_back(graph.edges[ei]);
    }
    std::sort(out.matchings[c].begin(), out.matchings[c].end(),
              [](const MultigraphEdge& a, const MultigraphEdge& b) { return a.row < b.row; });
  }
  return out;
}

namespace {

// Perfect-matching feasibility on pairs with cost <= threshold.
bool feasible_at(const LbaCostMatrix& mat, int threshold, std::vector<int>* out_match) {
  const int n = mat.size();
  std::vector<int> match_col(n, -1), match_row(n, -1);
  std::vector<uint8_t> visited(n, 0);
  std::function<bool(int)> augment = [&](int r) -> bool {
    for (int c = 0; c < n; ++c) {
      int w = mat.costs[r][c];
      if (w < 0 || w > threshold || visited[c]) continue;
      visited[c] = 1;
      if (match_col[c] < 0 || augment(match_col[c])) {
        match_col[c] = r;
        match_row[r] = c;
        return true;
      }
    }
    return false;
  };
  for (int r = 0; r < n; ++r) {
    std::fill(visited.begin(), visited.end(), 0);
    if (!augment(r)) return false;
  }
  if (out_match) *out_match = match_row;
  return true;
}

}  // namespace

std::vector<int> bottleneck_perfect_matching(const LbaCostMatrix& mat) {
  const int n = mat.size();
  for (const auto& row : mat.costs)
    if (int(row.size()) != n) throw StructuralError("cost matrix must be square");
  if (n == 0) return {};

  std::vector<int> values;
  for (const auto& row : mat.costs)
    for (int v : row)
      if (v >= 0) values.push_back(v);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  int lo = 0, hi = int(values.size()) - 1;
  if (hi < 0 || !feasible_at(mat, values.back(), nullptr))
    throw RegimeError("no perfect matching among allowed pairs");
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (feasible_at(mat, values[mid], nullptr))
      hi = mid;
    else
      lo = mid + 1;
  }
  std::vector<int> match;
  feasible_at(mat, values[lo], &match);
  return match;
}

MatchingSet lba_assign(int rows_count, int width,
                       const std::vector<int>& row_of_robot,
                       const std::vector<int>& color_of_robot,
                       const std::vector<std::vector<int>>& slot_cost) {
  // Validate regularity exactly like the plain decomposition path.
  ColorRowMultigraph graph =
      build_color_row_graph(rows_count, width, row_of_robot, color_of_robot);
  const int n = int(row_of_robot.size());
  if (int(slot_cost.size()) != n)
    throw StructuralError("slot_cost must have one row per robot");

  std::vector<uint8_t> assigned(n, 0);
  // robots grouped by (row, color) for candidate lookup.
  std::vector<std::vector<std::vector<int>>> group(
      rows_count, std::vector<std::vector<int>>(rows_count));
  for (int i = 0; i < n; ++i) group[row_of_robot[i]][color_of_robot[i]].push_back(i);
  for (auto& per_row : group)
    for (auto& robots : per_row) std::sort(robots.begin(), robots.end());

  // Step (a): per-column greedy bottleneck matchings, removing assigned
  // robots after each column.
  std::vector<std::vector<MultigraphEdge>> raw(width);
  for (int c = 0; c < width; ++c) {
    LbaCostMatrix mat;
    mat.costs.assign(rows_count, std::vector<int>(rows_count, -1));
    for (int r = 0; r < rows_count; ++r)
      for (int t = 0; t < rows_count; ++t) {
        int best = -1;
        for (int i : group[r][t]) {
          if (assigned[i]) continue;
          int v = slot_cost[i][c];
          if (best < 0 || v < best) best = v;
        }
        mat.costs[r][t] = best;
      }
    std::vector<int> match = bottleneck_perfect_matching(mat);
    for (int r = 0; r < rows_count; ++r) {
      int t = match[r];
      int chosen = -1;
      for (int i : group[r][t]) {
        if (assigned[i]) continue;
        if (chosen < 0 || slot_cost[i][c] < slot_cost[chosen][c]) chosen = i;
      }
      if (chosen < 0) throw RegimeError("per-column matching infeasible (internal)");
      assigned[chosen] = 1;
      raw[c].push_back({t, r, chosen});
    }
  }

  // Step (b): reassign whole matchings to columns under the bottleneck of
  // their members' slot costs.
  LbaCostMatrix reassign;
  reassign.costs.assign(width, std::vector<int>(width, 0));
  for (int c = 0; c < width; ++c)
    for (int target = 0; target < width; ++target) {
      int worst = 0;
      for (const MultigraphEdge& e : raw[c])
        worst = std::max(worst, slot_cost[e.robot][target]);
      reassign.costs[c][target] = worst;
    }
  std::vector<int> sigma = bottleneck_perfect_matching(reassign);

  MatchingSet out;
  out.matchings.resize(width);
  for (int c = 0; c < width; ++c) {
    out.matchings[sigma[c]] = raw[c];
    std::sort(out.matchings[sigma[c]].begin(), out.matchings[sigma[c]].end(),
              [](const MultigraphEdge& a, const MultigraphEdge& b) { return a.row < b.row; });
  }
  return out;
}

}  // namespace grplan
