#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grplan/error.hpp"

namespace grplan {

/// One edge of the color/row bipartite multigraph: the robot sits in
/// abstract row `row` and wants abstract row `color` (its goal row).
/// Indices are 0-based.
struct MultigraphEdge {
  int color = 0;
  int row = 0;
  int robot = 0;
};

/// d-regular bipartite multigraph on side+side nodes. Every color node and
/// every row node has degree exactly `degree`; edges carry distinct robots.
struct ColorRowMultigraph {
  int side = 0;
  int degree = 0;
  std::vector<MultigraphEdge> edges;
};

/// Builds the multigraph from a fully occupied abstract table: one edge per
/// robot (color = goal row, row = current row). Both arrays are indexed by
/// robot id; rows and colors are 0-based and < rows_count.
/// Throws RegimeError when the result would not be width-regular.
ColorRowMultigraph build_color_row_graph(int rows_count, int width,
                                         const std::vector<int>& row_of_robot,
                                         const std::vector<int>& color_of_robot);

/// Ordered decomposition into `degree` edge-disjoint perfect matchings whose
/// union is exactly the input edge multiset. Each robot appears in exactly
/// one matching. Deterministic.
struct MatchingSet {
  std::vector<std::vector<MultigraphEdge>> matchings;

  /// robot -> matching index, for tables with `robots` robots total.
  std::vector<int> matching_of_robot(int robots) const;
};

MatchingSet decompose_into_matchings(const ColorRowMultigraph& graph);

/// Square cost matrix for linear bottleneck assignment. Entries < 0 mark
/// forbidden pairs.
struct LbaCostMatrix {
  std::vector<std::vector<int>> costs;

  int size() const { return int(costs.size()); }
};

/// Bijection rows -> columns minimizing the maximum selected cost, via
/// threshold search over the distinct cost values. Returns row -> column.
/// Throws RegimeError when no perfect matching avoids forbidden pairs.
std::vector<int> bottleneck_perfect_matching(const LbaCostMatrix& costs);

/// LBA matching heuristic. slot_cost[i][c] is the price of parking robot i
/// in abstract column c (the caller bakes in its lambda choice). Produces a
/// MatchingSet whose matching c holds the robots routed to column c:
/// per-column greedy minimum-bottleneck matchings with robot removal,
/// followed by a global bottleneck reassignment of matchings to columns.
MatchingSet lba_assign(int rows_count, int width,
                       const std::vector<int>& row_of_robot,
                       const std::vector<int>& color_of_robot,
                       const std::vector<std::vector<int>>& slot_cost);

}  // namespace grplan
