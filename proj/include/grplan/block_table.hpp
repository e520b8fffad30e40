#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "grplan/error.hpp"

namespace grplan {

/// Tiny fully-occupied grid block. rows/cols in {2,3,4}; shapes with at
/// most 9 cells are tabulated exhaustively, 3x4 is solved on demand.
struct BlockShape {
  int rows = 0;
  int cols = 0;

  int cells() const { return rows * cols; }
  bool operator==(const BlockShape& o) const { return rows == o.rows && cols == o.cols; }
  bool operator<(const BlockShape& o) const {
    return rows != o.rows ? rows < o.rows : cols < o.cols;
  }
};

/// One permutation of the columns per block row: the item at (r, c) must
/// end at (r, per_row[r][c]).
struct SwapPattern {
  std::vector<std::vector<int>> per_row;

  bool is_identity() const;
};

/// A rotation along a simple cycle of block cells: the occupant of
/// cells[i] moves to cells[(i+1) % size] in one step. Cells are local
/// row-major indices.
struct CycleMove {
  std::vector<uint8_t> cells;
};

/// One parallel step: vertex-disjoint cycle rotations executed together.
struct ParallelMove {
  std::vector<CycleMove> cycles;
};

/// Move sequence realizing a SwapPattern on the fully occupied block.
struct BlockSolution {
  std::vector<ParallelMove> steps;

  int length() const { return int(steps.size()); }
};

/// All legal parallel moves on a fully occupied block: unions of
/// vertex-disjoint simple cycles, each in both orientations.
std::vector<ParallelMove> legal_parallel_moves(const BlockShape& shape);

/// Number of per-row permutation combinations: (cols!)^rows.
long long pattern_count(const BlockShape& shape);

/// Mixed-radix id of a pattern (lexicographic rank per row).
uint32_t pattern_id(const BlockShape& shape, const SwapPattern& pattern);
SwapPattern pattern_from_id(const BlockShape& shape, uint32_t id);

/// Applies a solution to the identity arrangement; result[c] = local cell
/// the item starting at c ends up in. Throws if a step is malformed.
std::vector<int> apply_solution(const BlockShape& shape, const BlockSolution& sol);

/// Owns the exhaustive per-shape tables (backward BFS over the joint
/// configuration space, one sweep per shape) and the on-demand 3x4 cache.
/// Tables persist to a binary disk cache; the cache is safe to delete.
class BlockTables {
 public:
  explicit BlockTables(std::string cache_dir = default_cache_dir());
  ~BlockTables();

  BlockTables(const BlockTables&) = delete;
  BlockTables& operator=(const BlockTables&) = delete;

  /// GRPLAN_CACHE_DIR if set, else .grplan-cache in the working directory.
  static std::string default_cache_dir();

  /// Minimum-step solution. Optimal for shapes with <= 9 cells; for 3x4 the
  /// bounded bidirectional search caps at 8 steps and falls back to two
  /// sequential 2x4 sub-block solutions (<= 12 steps) when exhausted.
  BlockSolution solve_pattern(const BlockShape& shape, const SwapPattern& pattern);

  /// Complete pattern -> solution table for a shape with <= 9 cells whose
  /// patterns are all realizable (the 3x2, 4x2, 2x3, 3x3, 2x4 family).
  const std::map<uint32_t, BlockSolution>& pattern_table(const BlockShape& shape);

  /// Longest optimal solution over the full pattern table.
  int table_max_steps(const BlockShape& shape);

  /// Node budget per search side for the on-demand 3x4 solver.
  void set_search_budget(size_t nodes) { search_budget_ = nodes; }
  /// Forces the decomposition fallback (testing hook).
  void set_force_fallback(bool on) { force_fallback_ = on; }

  void flush();

 private:
  struct ShapeTable;
  ShapeTable& table_for(const BlockShape& shape);
  BlockSolution solve_3x4(const SwapPattern& pattern);
  BlockSolution fallback_3x4(const SwapPattern& pattern);
  void load_ondemand_cache();
  void save_ondemand_cache();

  std::string cache_dir_;
  std::map<BlockShape, std::unique_ptr<ShapeTable>> tables_;
  std::unordered_map<uint32_t, BlockSolution> ondemand_;  // 3x4 only
  bool ondemand_loaded_ = false;
  int ondemand_dirty_ = 0;
  size_t search_budget_ = 400000;
  bool force_fallback_ = false;
};

}  // namespace grplan
