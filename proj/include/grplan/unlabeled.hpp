#pragma once

#include <vector>

#include "grplan/geometry.hpp"
#include "grplan/shuffles.hpp"

namespace grplan {

/// Bijection robots -> slots with minimal maximum shortest-path distance.
struct TargetAssignment {
  std::vector<int> slot_of_robot;  // index into the slot array
  int bottleneck = 0;
};

/// Minimizes the max obstacle-aware distance between matched pairs
/// (threshold search over BFS distances). |occupied| must equal |slots|.
TargetAssignment assign_targets(const std::vector<Cell>& occupied,
                                const std::vector<Cell>& slots,
                                const GridSpace& space);

/// Anonymous routing of a robot set onto a slot set.
struct UnlabeledResult {
  Fragment fragment;               // paths for the input robots
  std::vector<int> slot_of_robot;  // slot index each robot ends at
  int horizon = 0;                 // optimal T*
};

/// Makespan-optimal unlabeled routing via max flow on incrementally longer
/// time-expanded networks. Unit capacities everywhere; every undirected
/// grid edge per step runs through a two-node gadget so the edge is used by
/// at most one robot per step (no swaps). The horizon search starts at the
/// distance lower bound (or the supplied assignment bottleneck) and
/// increases by one until a flow of value n exists.
/// robots: (robot id, current cell). horizon_cap < 0 uses 4*(m1+m2+m3).
/// Throws RegimeError when no feasible horizon exists within the cap.
UnlabeledResult solve_unlabeled(const GridSpace& space,
                                const std::vector<std::pair<int, Cell>>& robots,
                                const std::vector<Cell>& slots,
                                int start_horizon = -1, int horizon_cap = -1);

}  // namespace grplan
