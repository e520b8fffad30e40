#pragma once

#include <cstdint>

#include "grplan/block_table.hpp"
#include "grplan/instance.hpp"
#include "grplan/matching.hpp"
#include "grplan/shuffles.hpp"

namespace grplan {

enum class MatchingHeuristic { Hall, Lba };

struct SolverOptions {
  OddEvenMode mode = OddEvenMode::Fast;  // full-density shuffles only
  MatchingHeuristic matching = MatchingHeuristic::Hall;
  bool refine = false;
  bool column_first = false;  // transposed shuffle order (the "-LL" variants)
  uint64_t seed = 0;
};

/// Adds virtual robots (start == goal, uniformly random free cells, seeded)
/// until robot count reaches floor(target_density * free cells). Added
/// robots are flagged in virtual_mask. Throws RegimeError when no room.
Instance fill_virtual(const Instance& instance, double target_density, uint64_t seed);

/// Same, to an exact robot count.
Instance fill_virtual_to(const Instance& instance, int target_count, uint64_t seed);

/// Full density (every free cell occupied, no obstacles): three rounds of
/// odd-even line shuffles. Makespan <= 7(m1+2m2) fast, <= 4(m1+2m2)+8
/// faster (even-dimension strips). Underfull instances are rejected.
Plan solve_grm(const Instance& instance, const SolverOptions& options, BlockTables& tables);

/// Up to 1/3 density (2/9 with the center-hole obstacle pattern),
/// dimensions multiples of 3: unlabeled flows onto vertical-centered slots,
/// three highway shuffle phases, reversed goal flow.
/// Makespan <= 3m1 + 4m2 + 30.
Plan solve_grh(const Instance& instance, const SolverOptions& options);

/// Up to 1/2 density, even dimensions, no obstacles: same structure with
/// linear-merge shuffles. Makespan <= 3m1+4m2+2(ceil(log2 m1)+ceil(log2 m2))+8.
Plan solve_grlm(const Instance& instance, const SolverOptions& options);

/// Grid-row/band coordinate of a centered slot.
struct AbstractSlot {
  int row = 0;   // grid row (1-based)
  int band = 0;  // band index (1-based)

  bool operator==(const AbstractSlot& o) const { return row == o.row && band == o.band; }
};

/// Shared machinery of the centered regimes, reused by the 3D pipeline.
namespace centered {

/// Vertical-centered slot cells: middle column of each 3-wide band (third)
/// or left column of each 2-wide band (half), skipping obstacle cells.
std::vector<Cell> slots(const GridSpace& g, int band_width);

/// True when the obstacle set is exactly the (3k+2, 3k'+2) center-hole grid.
bool is_center_hole_pattern(const GridSpace& g);

/// Slot cell of an AbstractSlot.
Cell slot_cell(const AbstractSlot& s, int band_width);

/// The three-phase rearrangement of a fully occupied centered table:
/// row shuffles per matching, column shuffles to goal rows, row shuffles to
/// goal bands. `cur` is updated in place and must equal `goal` afterwards.
/// Fragment robots carry the supplied ids. band_width 3 uses highway
/// shuffles, band_width 2 linear merges.
Fragment rearrange_phases(const GridSpace& g, int band_width, const std::vector<int>& ids,
                      std::vector<AbstractSlot>& cur, const std::vector<AbstractSlot>& goal,
                      MatchingHeuristic matching);

}  // namespace centered

/// The three odd-even phases of the full-density solver on one 2D section
/// whose every cell is occupied. cur is updated in place; fragment robots
/// carry the supplied ids. Reused per plane by the 3D pipeline.
Fragment full_density_phases(const GridSpace& g, const std::vector<int>& ids,
                             std::vector<Cell>& cur, const std::vector<Cell>& goal,
                             const SolverOptions& options, BlockTables& tables);

/// x/y transposition helpers (used by the column-first variants).
Instance transpose_instance(const Instance& instance);
Plan transpose_plan(const Plan& plan);

}  // namespace grplan
