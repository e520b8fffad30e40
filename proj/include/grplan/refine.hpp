#pragma once

#include <deque>
#include <vector>

#include "grplan/instance.hpp"

namespace grplan {

/// Per-vertex FIFO of robot visits in input-plan order, waits removed.
/// Queues are indexed by GridSpace linear cell index; a robot re-entering a
/// vertex appears once per entry (the initial position counts as the first
/// visit).
struct VisitOrderIndex {
  std::vector<std::deque<int>> queues;
};

VisitOrderIndex build_visit_order(const Instance& instance, const Plan& plan);

/// De-synchronizes a valid plan: every robot takes its next non-idling move
/// as early as possible while the per-vertex visit order of the input plan
/// is preserved exactly. Cycles rotate atomically. Makespan and SOC never
/// increase. Throws InvalidPlanError when the input plan is invalid.
Plan refine(const Instance& instance, const Plan& plan);

}  // namespace grplan
