#pragma once

#include <utility>
#include <vector>

#include "grplan/block_table.hpp"
#include "grplan/geometry.hpp"
#include "grplan/instance.hpp"

namespace grplan {

/// Relative motion of a robot subset over a shared step window. Paths have
/// length steps+1 and begin at the robot's current cell; robots absent from
/// the fragment wait in place.
struct Fragment {
  int steps = 0;
  std::vector<std::pair<int, std::vector<Cell>>> paths;

  bool empty() const { return steps == 0; }
  /// Combines fragments over disjoint robot sets; shorter ones pad with waits.
  void merge_parallel(Fragment other);
};

/// Accumulates fragments into a full plan over a fixed robot set.
class PlanBuilder {
 public:
  explicit PlanBuilder(std::vector<Cell> start);

  void apply(const Fragment& fragment);
  const Cell& at(int robot) const { return cur_[robot]; }
  const std::vector<Cell>& positions() const { return cur_; }
  int horizon() const { return horizon_; }
  Plan take();

 private:
  int horizon_ = 0;
  std::vector<std::vector<Cell>> paths_;
  std::vector<Cell> cur_;
};

enum class Axis { Row, Column };  // direction lines run: Row = horizontal lines

/// A 2-, 3- or 4-wide strip of grid rows (orientation Row: lines run along
/// columns y=1..length) or grid columns (orientation Column). Bands of one
/// orientation partition the grid.
struct Band {
  Axis orientation = Axis::Row;
  int first = 1;   // first grid row (Row) or column (Column) of the strip
  int width = 3;   // strip thickness
  int length = 0;  // cells along the shuffle axis

  /// Grid cell of (strip line `line` in [0..width), position `pos` in [1..length]).
  Cell cell(int line, int pos) const {
    return orientation == Axis::Row ? Cell(first + line, pos) : Cell(pos, first + line);
  }
};

/// One robot relocation along a band: positions are 1-based indices along
/// the shuffle axis.
struct SlotMove {
  int robot = 0;
  int from = 0;
  int to = 0;
};

enum class OddEvenMode { Fast, Faster };

/// One round of simultaneous full-line permutations at full density.
/// `target` must keep every robot on its own line. Fast mode partitions the
/// perpendicular dimension into 3/4-wide strips with width-2 sorting
/// windows; faster mode uses 2-wide strips with width-3/4 windows.
/// Step bounds: fast <= 7*len; faster <= 4*len + 8 where all strips are 2-wide.
Fragment odd_even_shuffle(const GridSpace& g, Axis line_axis,
                          const std::vector<Cell>& positions,
                          const std::vector<Cell>& target, OddEvenMode mode,
                          BlockTables& tables);

/// Band permutation along the center line of a 3-wide band using the two
/// side lines as one-way lanes. Robots exit simultaneously, travel at
/// constant speed without stopping, and enter their target slot on arrival.
/// Decreasing-index movers take the lane with the smaller perpendicular
/// coordinate. <= len + 7 steps (realized: max |shift| + 2).
Fragment highway_shuffle(const GridSpace& g, const Band& band,
                         const std::vector<SlotMove>& moves);

/// Merge-sort band permutation for 2-wide bands whose primary line is fully
/// occupied. Movers toward lower indices slide along the primary line
/// without stopping; movers toward higher indices dip into the secondary
/// line. <= len + 2*(ceil(log2 len)+1) + 2 steps.
Fragment linear_merge_shuffle(const GridSpace& g, const Band& band,
                              const std::vector<SlotMove>& moves);

/// Centered layouts: which slots of each band cell robots occupy.
enum class Layout {
  VerticalThird,    // middle column of each 3x3 cell
  HorizontalThird,  // middle row of each 3x3 cell
  VerticalHalf,     // left column of each 2x2 cell
  HorizontalHalf,   // top row of each 2x2 cell
};

/// Cell-local conversion between centered layouts of the same regime.
/// Canonical slot mapping top->left, middle->middle, bottom->right.
/// <= 3 steps (third regime), <= 2 steps (half regime).
Fragment convert_centered(const GridSpace& g, Layout from, Layout to,
                          const std::vector<std::pair<int, Cell>>& robots);

}  // namespace grplan
