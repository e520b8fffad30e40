#include "grplan.h"

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <json.hpp>

#include "grplan/json_io.hpp"
#include "grplan/pipeline2d.hpp"
#include "grplan/pipeline3d.hpp"
#include "grplan/refine.hpp"
#include "grplan/scenario.hpp"

using namespace grplan;

struct grp_instance {
  Instance value;
};
struct grp_plan {
  Plan value;
};

namespace {

thread_local std::string g_last_error;

grp_status fail(grp_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
grp_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const InvalidPlanError& e) {
    return fail(GRP_ERR_INVALID_PLAN, e.what());
  } catch (const RegimeError& e) {
    return fail(GRP_ERR_REGIME, e.what());
  } catch (const StructuralError& e) {
    return fail(GRP_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    return fail(GRP_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Block tables are shared per cache directory; computing them is expensive.
BlockTables& tables_for(const char* cache_dir) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<BlockTables>> cache;
  std::string dir = cache_dir && *cache_dir ? cache_dir : BlockTables::default_cache_dir();
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[dir];
  if (!slot) slot = std::make_unique<BlockTables>(dir);
  return *slot;
}

std::mutex g_tables_mutex;  // full-density solves share the table store

}  // namespace

extern "C" {

const char* grp_version(void) { return "1.0.0"; }

const char* grp_last_error(void) { return g_last_error.c_str(); }

grp_status grp_instance_from_json(const char* json, grp_instance** out) {
  if (!json || !out) return fail(GRP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    Instance value = instance_from_json(json);
    *out = new grp_instance{std::move(value)};
    return GRP_OK;
  });
}

grp_status grp_instance_to_json(const grp_instance* ins, int indent, char** out_json) {
  if (!ins || !out_json) return fail(GRP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out_json = dup_string(instance_to_json(ins->value, indent));
    return GRP_OK;
  });
}

void grp_instance_free(grp_instance* ins) { delete ins; }

grp_status grp_plan_from_json(const char* json, grp_plan** out) {
  if (!json || !out) return fail(GRP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    Plan value = plan_from_json(json);
    *out = new grp_plan{std::move(value)};
    return GRP_OK;
  });
}

grp_status grp_plan_to_json(const grp_plan* plan, int indent, char** out_json) {
  if (!plan || !out_json) return fail(GRP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out_json = dup_string(plan_to_json(plan->value, indent));
    return GRP_OK;
  });
}

void grp_plan_free(grp_plan* plan) { delete plan; }

void grp_string_free(char* s) { delete[] s; }

grp_status grp_instance_info(const grp_instance* ins, int32_t* m1, int32_t* m2,
                             int32_t* m3, int32_t* robots) {
  if (!ins) return fail(GRP_ERR_ARGUMENT, "null argument");
  if (m1) *m1 = ins->value.space.m1();
  if (m2) *m2 = ins->value.space.m2();
  if (m3) *m3 = ins->value.space.m3();
  if (robots) *robots = ins->value.num_robots();
  return GRP_OK;
}

grp_status grp_generate(const char* spec_json, grp_instance** out) {
  if (!spec_json || !out) return fail(GRP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    nlohmann::json j = nlohmann::json::parse(spec_json, nullptr, false);
    if (j.is_discarded()) throw StructuralError("malformed spec JSON");
    InstanceSpec spec;
    auto dims = j.at("dims");
    if (!dims.is_array() || (dims.size() != 2 && dims.size() != 3))
      throw StructuralError("dims must have 2 or 3 entries");
    spec.m1 = dims[0].get<int>();
    spec.m2 = dims[1].get<int>();
    spec.m3 = dims.size() == 3 ? dims[2].get<int>() : 0;
    spec.density = j.value("density", 1.0 / 3.0);
    std::string obs = j.value("obstacles", "none");
    if (obs == "none")
      spec.obstacles = ObstaclePattern::None;
    else if (obs == "center-hole")
      spec.obstacles = ObstaclePattern::CenterHole;
    else
      throw StructuralError("unknown obstacle pattern: " + obs);
    std::string scn = j.value("scenario", "random");
    if (scn == "random")
      spec.scenario = Scenario::Random;
    else if (scn == "squares")
      spec.scenario = Scenario::Squares;
    else if (scn == "blocks")
      spec.scenario = Scenario::Blocks;
    else
      throw StructuralError("unknown scenario: " + scn);
    spec.seed = j.value("seed", uint64_t(0));
    Instance value = generate(spec);
    *out = new grp_instance{std::move(value)};
    return GRP_OK;
  });
}

grp_status grp_solve(const grp_instance* ins, const grp_solve_options* opts,
                     grp_plan** out) {
  if (!ins || !opts || !out) return fail(GRP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    SolverOptions options;
    options.mode = opts->faster_mode ? OddEvenMode::Faster : OddEvenMode::Fast;
    options.matching =
        opts->lba_matching ? MatchingHeuristic::Lba : MatchingHeuristic::Hall;
    options.refine = opts->refine != 0;
    options.column_first = opts->column_first != 0;
    options.seed = opts->seed;

    Plan value;
    switch (opts->algo) {
      case GRP_ALGO_GRM: {
        std::lock_guard<std::mutex> lock(g_tables_mutex);
        value = solve_grm(ins->value, options, tables_for(opts->cache_dir));
        break;
      }
      case GRP_ALGO_GRH:
        value = solve_grh(ins->value, options);
        break;
      case GRP_ALGO_GRLM:
        value = solve_grlm(ins->value, options);
        break;
      case GRP_ALGO_GRH3D:
        value = solve_grh3d(ins->value, options);
        break;
      case GRP_ALGO_GRM3D: {
        std::lock_guard<std::mutex> lock(g_tables_mutex);
        value = solve_grm3d(ins->value, options, tables_for(opts->cache_dir));
        break;
      }
      case GRP_ALGO_GRLM3D:
        value = solve_grlm3d(ins->value, options);
        break;
      default:
        return fail(GRP_ERR_ARGUMENT, "unknown algorithm");
    }
    *out = new grp_plan{std::move(value)};
    return GRP_OK;
  });
}

grp_status grp_validate(const grp_instance* ins, const grp_plan* plan,
                        int* out_valid, char** out_report_json) {
  if (!ins || !plan || !out_valid) return fail(GRP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    ValidationReport report = validate_plan(ins->value, plan->value);
    *out_valid = report.valid ? 1 : 0;
    if (out_report_json) *out_report_json = dup_string(report_to_json(report, -1));
    return GRP_OK;
  });
}

grp_status grp_refine(const grp_instance* ins, const grp_plan* plan, grp_plan** out) {
  if (!ins || !plan || !out) return fail(GRP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    Plan value = refine(ins->value, plan->value);
    *out = new grp_plan{std::move(value)};
    return GRP_OK;
  });
}

grp_status grp_metrics_compute(const grp_instance* ins, const grp_plan* plan,
                               grp_metrics* out) {
  if (!ins || !plan || !out) return fail(GRP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    Metrics m = compute_metrics(ins->value, plan->value);
    out->makespan = m.makespan;
    out->soc = m.soc;
    out->lower_bound = m.lower_bound;
    out->optimality_ratio = m.optimality_ratio;
    return GRP_OK;
  });
}

grp_status grp_lower_bound(const grp_instance* ins, int use_bfs, int32_t* out) {
  if (!ins || !out) return fail(GRP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = use_bfs ? makespan_lower_bound_bfs(ins->value)
                   : makespan_lower_bound(ins->value);
    return GRP_OK;
  });
}

grp_status grp_fill_virtual(const grp_instance* ins, double target_density,
                            uint64_t seed, grp_instance** out) {
  if (!ins || !out) return fail(GRP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    Instance value = fill_virtual(ins->value, target_density, seed);
    *out = new grp_instance{std::move(value)};
    return GRP_OK;
  });
}

grp_status grp_strip_virtual(const grp_instance* ins, const grp_plan* plan,
                             grp_instance** out_ins, grp_plan** out_plan) {
  if (!ins || !plan || !out_ins || !out_plan)
    return fail(GRP_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    Instance stripped_ins = strip_virtual_instance(ins->value);
    Plan stripped_plan = strip_virtual(ins->value, plan->value);
    *out_ins = new grp_instance{std::move(stripped_ins)};
    *out_plan = new grp_plan{std::move(stripped_plan)};
    return GRP_OK;
  });
}

}  // extern "C"
