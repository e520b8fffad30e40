#include "grplan/instance.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace grplan {

int Instance::num_real() const {
  int n = 0;
  for (int i = 0; i < num_robots(); ++i)
    if (!is_virtual(i)) ++n;
  return n;
}

void Instance::check() const {
  if (starts.size() != goals.size())
    throw StructuralError("starts/goals length mismatch");
  if (!virtual_mask.empty() && virtual_mask.size() != starts.size())
    throw StructuralError("virtual_mask length mismatch");
  if (int(starts.size()) > space.num_free())
    throw StructuralError("more robots than free cells");
  std::unordered_set<int> seen_s, seen_g;
  for (int i = 0; i < num_robots(); ++i) {
    if (!space.is_free(starts[i]) || !space.is_free(goals[i]))
      throw StructuralError("start or goal out of bounds or on an obstacle");
    if (!seen_s.insert(space.index(starts[i])).second)
      throw StructuralError("start configuration not injective");
    if (!seen_g.insert(space.index(goals[i])).second)
      throw StructuralError("goal configuration not injective");
  }
}

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Vertex: return "vertex";
    case ViolationKind::Swap: return "swap";
    case ViolationKind::Adjacency: return "adjacency";
    case ViolationKind::Endpoint: return "endpoint";
    case ViolationKind::Obstacle: return "obstacle";
  }
  return "?";
}

std::string ValidationReport::summary(int max_items) const {
  if (valid) return "valid";
  std::ostringstream os;
  os << violations.size() << " violation(s):";
  int shown = 0;
  for (const Violation& v : violations) {
    if (shown++ == max_items) {
      os << " ...";
      break;
    }
    os << " [" << to_string(v.kind) << " t=" << v.time << " robots";
    for (int r : v.robots) os << " " << r + 1;
    os << "]";
  }
  return os.str();
}

ValidationReport validate_plan(const Instance& instance, const Plan& plan) {
  const GridSpace& g = instance.space;
  if (plan.num_robots() != instance.num_robots())
    throw StructuralError("plan robot count differs from instance");
  for (const auto& p : plan.paths)
    if (int(p.size()) != plan.horizon + 1)
      throw StructuralError("path length differs from horizon+1");
  // Dimensionality must agree (z present iff 3D).
  for (const auto& p : plan.paths)
    for (const Cell& c : p)
      if ((c.z != 0) != g.is3d())
        throw StructuralError("plan coordinates do not match grid dimensionality");

  ValidationReport report;
  auto add = [&report](ViolationKind k, int t, std::vector<int> robots) {
    report.violations.push_back({k, t, std::move(robots)});
  };

  const int n = instance.num_robots();
  for (int i = 0; i < n; ++i) {
    if (instance.is_virtual(i)) continue;
    if (plan.paths[i].front() != instance.starts[i] ||
        plan.paths[i].back() != instance.goals[i])
      add(ViolationKind::Endpoint, plan.paths[i].front() != instance.starts[i] ? 0 : plan.horizon, {i});
  }

  // Occupancy scan, one timestep at a time.
  std::vector<int> occupant(g.num_cells(), -1);
  std::vector<int> touched;
  touched.reserve(n);
  for (int t = 0; t <= plan.horizon; ++t) {
    for (int idx : touched) occupant[idx] = -1;
    touched.clear();
    for (int i = 0; i < n; ++i) {
      const Cell& c = plan.paths[i][t];
      if (!g.in_bounds(c) || g.is_obstacle(c)) {
        add(ViolationKind::Obstacle, t, {i});
        continue;
      }
      int idx = g.index(c);
      if (occupant[idx] >= 0) {
        add(ViolationKind::Vertex, t, {occupant[idx], i});
      } else {
        occupant[idx] = i;
        touched.push_back(idx);
      }
      if (t > 0) {
        const Cell& prev = plan.paths[i][t - 1];
        int d = manhattan(prev, c);
        if (d > 1) add(ViolationKind::Adjacency, t, {i});
      }
    }
    if (t > 0) {
      for (int i = 0; i < n; ++i) {
        const Cell& a0 = plan.paths[i][t - 1];
        const Cell& a1 = plan.paths[i][t];
        if (a0 == a1 || !g.in_bounds(a1) || !g.in_bounds(a0)) continue;
        // Swap: some j moved a1 -> a0 in the same step. Look up who was at a1.
        // occupant[] currently holds time-t occupancy, so check j at a0 now.
        int j = g.in_bounds(a0) && !g.is_obstacle(a0) ? occupant[g.index(a0)] : -1;
        if (j >= 0 && j != i && j > i && plan.paths[j][t - 1] == a1)
          add(ViolationKind::Swap, t, {i, j});
      }
    }
  }
  report.valid = report.violations.empty();
  return report;
}

int makespan_lower_bound(const Instance& instance) {
  int lb = 0;
  for (int i = 0; i < instance.num_robots(); ++i) {
    if (instance.is_virtual(i)) continue;
    lb = std::max(lb, manhattan(instance.starts[i], instance.goals[i]));
  }
  return lb;
}

int makespan_lower_bound_bfs(const Instance& instance) {
  int lb = 0;
  for (int i = 0; i < instance.num_robots(); ++i) {
    if (instance.is_virtual(i)) continue;
    std::vector<int> dist = instance.space.bfs_distances({instance.starts[i]});
    int d = dist[instance.space.index(instance.goals[i])];
    if (d < 0) throw StructuralError("goal unreachable from start");
    lb = std::max(lb, d);
  }
  return lb;
}

namespace {
// Last step at which robot i is not yet resting at its final cell.
int arrival_time(const std::vector<Cell>& path) {
  int t = int(path.size()) - 1;
  while (t > 0 && path[t - 1] == path.back()) --t;
  return t;
}
}  // namespace

Metrics compute_metrics(const Instance& instance, const Plan& plan) {
  ValidationReport report = validate_plan(instance, plan);
  if (!report.valid)
    throw InvalidPlanError("compute_metrics: plan invalid: " + report.summary(),
                           std::move(report));
  Metrics m;
  for (int i = 0; i < instance.num_robots(); ++i) {
    if (instance.is_virtual(i)) continue;
    int a = arrival_time(plan.paths[i]);
    m.makespan = std::max(m.makespan, a);
    m.soc += a;
  }
  m.lower_bound = makespan_lower_bound(instance);
  m.optimality_ratio =
      m.lower_bound > 0 ? double(m.makespan) / m.lower_bound : 1.0;
  return m;
}

Plan strip_virtual(const Instance& instance, const Plan& plan) {
  Plan out;
  out.horizon = plan.horizon;
  for (int i = 0; i < instance.num_robots(); ++i)
    if (!instance.is_virtual(i)) out.paths.push_back(plan.paths[i]);
  return out;
}

Instance strip_virtual_instance(const Instance& instance) {
  Instance out{instance.space, {}, {}, {}};
  for (int i = 0; i < instance.num_robots(); ++i) {
    if (instance.is_virtual(i)) continue;
    out.starts.push_back(instance.starts[i]);
    out.goals.push_back(instance.goals[i]);
  }
  return out;
}

Plan reverse_plan(const Plan& plan) {
  Plan out;
  out.horizon = plan.horizon;
  out.paths.reserve(plan.paths.size());
  for (const auto& p : plan.paths) out.paths.emplace_back(p.rbegin(), p.rend());
  return out;
}

Instance reverse_instance(const Instance& instance) {
  Instance out = instance;
  std::swap(out.starts, out.goals);
  return out;
}

}  // namespace grplan
