#pragma once

#include "grplan/pipeline2d.hpp"

namespace grplan {

/// z-shuffle matching over (x,y) classes: builds the m3-regular bipartite
/// multigraph between current and goal (x,y) classes of the centered
/// configuration, decomposes it, and realizes the per-column depth
/// permutation with highway z-shuffles (side columns of each band as
/// lanes). cur is updated in place. <= m3 + 7 steps.
struct MatchingXy {
  std::vector<int> depth_of_robot;  // intermediate z (1-based)
  Fragment fragment;
};

MatchingXy matching_xy(const GridSpace& g, const std::vector<int>& ids,
                       std::vector<Cell>& cur, const std::vector<Cell>& goal,
                       MatchingHeuristic matching);

/// Runs the 2D three-phase fitting independently and simultaneously in
/// every x-y plane; afterwards every robot is at its goal (x,y) in its
/// current plane. Planes never exchange robots.
Fragment xy_fitting(const GridSpace& g, const std::vector<int>& ids,
                    std::vector<Cell>& cur, const std::vector<Cell>& goal,
                    MatchingHeuristic matching);

/// 1/3-density 3D pipeline: unlabeled balancing, MatchingXY, per-plane
/// fitting, z-fitting, reversed unlabeled. m1, m2 multiples of 3, no
/// obstacles. Makespan <= 3m1 + 4m2 + 4m3 + 40.
Plan solve_grh3d(const Instance& instance, const SolverOptions& options);

/// Full-density 3D: z odd-even shuffles, per-plane full-density fitting,
/// z odd-even shuffles.
Plan solve_grm3d(const Instance& instance, const SolverOptions& options, BlockTables& tables);

/// Half-density 3D: GRH3D structure with 2-wide bands, linear merges in
/// the planes and single-lane z highways.
Plan solve_grlm3d(const Instance& instance, const SolverOptions& options);

}  // namespace grplan
