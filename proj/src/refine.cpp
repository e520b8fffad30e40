#include "grplan/refine.hpp"

#include <unordered_map>
#include <unordered_set>

namespace grplan {

VisitOrderIndex build_visit_order(const Instance& instance, const Plan& plan) {
  VisitOrderIndex order;
  order.queues.resize(instance.space.num_cells());
  for (int i = 0; i < plan.num_robots(); ++i)
    order.queues[instance.space.index(plan.paths[i][0])].push_back(i);
  for (int t = 1; t <= plan.horizon; ++t)
    for (int i = 0; i < plan.num_robots(); ++i)
      if (plan.paths[i][t] != plan.paths[i][t - 1])
        order.queues[instance.space.index(plan.paths[i][t])].push_back(i);
  return order;
}

namespace {

class McpRunner {
 public:
  McpRunner(const Instance& instance, const Plan& plan)
      : space_(instance.space), n_(plan.num_robots()) {
    // Wait-free vertex sequences.
    seq_.resize(n_);
    next_.assign(n_, 1);
    for (int i = 0; i < n_; ++i) {
      seq_[i].push_back(plan.paths[i][0]);
      for (int t = 1; t <= plan.horizon; ++t)
        if (plan.paths[i][t] != plan.paths[i][t - 1]) seq_[i].push_back(plan.paths[i][t]);
    }
    order_ = build_visit_order(instance, plan);
    occupant_.assign(space_.num_cells(), -1);
    cur_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      cur_[i] = seq_[i][0];
      occupant_[space_.index(cur_[i])] = i;
      order_.queues[space_.index(cur_[i])].pop_front();  // initial visit consumed
    }
  }

  Plan run() {
    Plan out;
    out.paths.resize(n_);
    for (int i = 0; i < n_; ++i) out.paths[i].push_back(cur_[i]);
    // Generous cap; the policy is deadlock-free on valid input.
    long long cap = 2LL * (seq_total() + n_) + 8;
    while (!all_done()) {
      moved_.clear();
      bool progress = false;
      for (int i = 0; i < n_; ++i) {
        if (moved_.count(i)) continue;
        cycle_check_.clear();
        progress |= move(i);
      }
      if (!progress) throw SolverError("refinement stalled (internal)");
      for (int i = 0; i < n_; ++i) out.paths[i].push_back(cur_[i]);
      ++out.horizon;
      if (--cap < 0) throw SolverError("refinement did not terminate (internal)");
    }
    return out;
  }

 private:
  long long seq_total() const {
    long long s = 0;
    for (const auto& q : seq_) s += static_cast<long long>(q.size());
    return s;
  }

  bool all_done() const {
    for (int i = 0; i < n_; ++i)
      if (next_[i] < int(seq_[i].size())) return false;
    return true;
  }

  bool done(int i) const { return next_[i] >= int(seq_[i].size()); }

  void enter(int i) {
    const Cell& v = seq_[i][next_[i]];
    occupant_[space_.index(cur_[i])] = -1;
    occupant_[space_.index(v)] = i;
    order_.queues[space_.index(v)].pop_front();
    cur_[i] = v;
    ++next_[i];
    moved_[i] = true;
  }

  bool move(int i) {
    if (auto it = moved_.find(i); it != moved_.end()) return it->second;
    if (done(i)) return moved_[i] = false;
    const Cell& v = seq_[i][next_[i]];
    auto& queue = order_.queues[space_.index(v)];
    if (queue.empty() || queue.front() != i) return moved_[i] = false;
    int j = occupant_[space_.index(v)];
    if (j < 0) {
      enter(i);
      return true;
    }
    if (auto it = moved_.find(j); it != moved_.end()) {
      if (occupant_[space_.index(v)] == j) return moved_[i] = false;
      enter(i);
      return true;
    }
    if (cycle_check_.count(i)) {
      rotate_cycle(i);
      return true;
    }
    cycle_check_.insert(i);
    bool freed = move(j);
    if (auto it = moved_.find(i); it != moved_.end()) return it->second;
    if (freed && occupant_[space_.index(v)] < 0) {
      enter(i);
      return true;
    }
    return moved_[i] = false;
  }

  // All robots on the occupant cycle through i advance one step together.
  void rotate_cycle(int i) {
    std::vector<int> chain;
    std::unordered_set<int> seen;
    int j = i;
    while (!seen.count(j)) {
      seen.insert(j);
      chain.push_back(j);
      j = occupant_[space_.index(seq_[j][next_[j]])];
      if (j < 0) throw SolverError("broken movement cycle (internal)");
    }
    size_t cut = 0;
    while (chain[cut] != j) ++cut;  // rotate only the closed part
    for (size_t k = cut; k < chain.size(); ++k) {
      int r = chain[k];
      occupant_[space_.index(cur_[r])] = -1;
    }
    for (size_t k = cut; k < chain.size(); ++k) {
      int r = chain[k];
      const Cell& v = seq_[r][next_[r]];
      auto& queue = order_.queues[space_.index(v)];
      if (queue.empty() || queue.front() != r)
        throw SolverError("cycle rotation violates visit order (internal)");
      occupant_[space_.index(v)] = r;
      queue.pop_front();
      cur_[r] = v;
      ++next_[r];
      moved_[r] = true;
    }
  }

  const GridSpace& space_;
  int n_;
  std::vector<std::vector<Cell>> seq_;
  std::vector<int> next_;
  std::vector<Cell> cur_;
  std::vector<int> occupant_;
  VisitOrderIndex order_;
  std::unordered_map<int, bool> moved_;
  std::unordered_set<int> cycle_check_;
};

}  // namespace

Plan refine(const Instance& instance, const Plan& plan) {
  ValidationReport report = validate_plan(instance, plan);
  if (!report.valid)
    throw InvalidPlanError("refine: input plan invalid: " + report.summary(),
                           std::move(report));
  if (plan.horizon == 0) return plan;
  McpRunner runner(instance, plan);
  return runner.run();
}

}  // namespace grplan
