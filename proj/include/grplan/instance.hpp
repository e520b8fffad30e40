#pragma once

#include <string>
#include <vector>

#include "grplan/geometry.hpp"

namespace grplan {

/// A labeled MRPP instance: injective start and goal configurations of n
/// robots on a grid. Robots are indexed 0..n-1 internally; external ids in
/// JSON are 1-based. Robots flagged in virtual_mask are density fillers and
/// are exempt from endpoint checks.
struct Instance {
  GridSpace space;
  std::vector<Cell> starts;
  std::vector<Cell> goals;
  std::vector<uint8_t> virtual_mask;  // empty == all real

  int num_robots() const { return int(starts.size()); }
  bool is_virtual(int i) const {
    return !virtual_mask.empty() && virtual_mask[i] != 0;
  }
  int num_real() const;

  /// Throws StructuralError if injectivity/bounds/obstacle rules fail.
  void check() const;
};

/// Per-robot vertex sequences over a common horizon T. Every path has
/// length T+1.
struct Plan {
  int horizon = 0;
  std::vector<std::vector<Cell>> paths;

  int num_robots() const { return int(paths.size()); }
};

enum class ViolationKind { Vertex, Swap, Adjacency, Endpoint, Obstacle };

const char* to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  int time;                 // step t: the transition t-1 -> t, or state at t
  std::vector<int> robots;  // involved robots (0-based)
};

struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;

  std::string summary(int max_items = 5) const;
};

/// Makespan/SOC metrics against the conservative lower bound.
struct Metrics {
  int makespan = 0;
  long long soc = 0;
  int lower_bound = 0;
  double optimality_ratio = 1.0;  // makespan / lower_bound; 1 when both are 0
};

/// Full collision check: vertex conflicts, swap conflicts, non-adjacent
/// moves, obstacle entries, endpoint mismatches. Cycle rotations are legal.
/// Virtual robots are exempt from endpoint checks only.
/// Throws StructuralError on instance/plan shape mismatch.
ValidationReport validate_plan(const Instance& instance, const Plan& plan);

/// Max Manhattan distance between any non-virtual start/goal pair; a
/// certified makespan lower bound (obstacles ignored).
int makespan_lower_bound(const Instance& instance);

/// Obstacle-aware variant: max over robots of BFS shortest-path distance.
/// At least as strong as makespan_lower_bound; not the default in metrics.
int makespan_lower_bound_bfs(const Instance& instance);

/// Raised by compute_metrics and refine when handed an invalid plan.
class InvalidPlanError : public SolverError {
 public:
  InvalidPlanError(std::string what, ValidationReport report)
      : SolverError(std::move(what)), report(std::move(report)) {}
  ValidationReport report;
};

/// Metrics for a valid plan. Trailing synchronized waits do not count:
/// makespan is the smallest t after which no non-virtual robot moves and
/// all rest at goals; SOC sums the per-robot arrival times. Virtual robots
/// are excluded. Throws InvalidPlanError when the plan fails validation.
Metrics compute_metrics(const Instance& instance, const Plan& plan);

/// Drops virtual robots' paths; the result is a plan for strip_virtual_instance.
Plan strip_virtual(const Instance& instance, const Plan& plan);
Instance strip_virtual_instance(const Instance& instance);

/// Time-reversal. Valid plans stay valid for the instance with starts and
/// goals exchanged.
Plan reverse_plan(const Plan& plan);
Instance reverse_instance(const Instance& instance);

}  // namespace grplan
