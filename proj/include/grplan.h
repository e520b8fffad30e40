/* C interface to the grid rearrangement planning library.
 *
 * All objects are opaque handles created and destroyed here. Functions
 * return GRP_OK on success; on failure grp_last_error() carries a
 * thread-local message. Strings returned through out-parameters are heap
 * allocated and released with grp_string_free().
 */
#ifndef GRPLAN_H
#define GRPLAN_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct grp_instance grp_instance;
typedef struct grp_plan grp_plan;

typedef enum grp_status {
  GRP_OK = 0,
  GRP_ERR_PARSE = 1,        /* malformed JSON or structural input errors */
  GRP_ERR_REGIME = 2,       /* instance outside the algorithm's regime */
  GRP_ERR_INVALID_PLAN = 3, /* plan failed validation */
  GRP_ERR_ARGUMENT = 4,     /* null pointers, unknown enum values */
  GRP_ERR_INTERNAL = 5
} grp_status;

typedef enum grp_algo {
  GRP_ALGO_GRM = 0,   /* full density, 2D */
  GRP_ALGO_GRH = 1,   /* <= 1/3 density, 2D, center-hole obstacles allowed */
  GRP_ALGO_GRLM = 2,  /* <= 1/2 density, 2D */
  GRP_ALGO_GRH3D = 3, /* <= 1/3 density, 3D */
  GRP_ALGO_GRM3D = 4,
  GRP_ALGO_GRLM3D = 5
} grp_algo;

typedef struct grp_solve_options {
  grp_algo algo;
  int faster_mode;       /* full-density regimes only */
  int lba_matching;      /* bottleneck-assignment matching heuristic */
  int refine;            /* post-process with the visit-order refinement */
  int column_first;      /* transposed shuffle order */
  uint64_t seed;         /* virtual filling */
  const char* cache_dir; /* block-table cache; NULL = $GRPLAN_CACHE_DIR or .grplan-cache */
} grp_solve_options;

typedef struct grp_metrics {
  int32_t makespan;
  int64_t soc;
  int32_t lower_bound;
  double optimality_ratio;
} grp_metrics;

const char* grp_version(void);
const char* grp_last_error(void);

/* JSON formats: see the repository README. Coordinates are 1-based. */
grp_status grp_instance_from_json(const char* json, grp_instance** out);
grp_status grp_instance_to_json(const grp_instance* ins, int indent, char** out_json);
void grp_instance_free(grp_instance* ins);

grp_status grp_plan_from_json(const char* json, grp_plan** out);
grp_status grp_plan_to_json(const grp_plan* plan, int indent, char** out_json);
void grp_plan_free(grp_plan* plan);

void grp_string_free(char* s);

grp_status grp_instance_info(const grp_instance* ins, int32_t* m1, int32_t* m2,
                             int32_t* m3, int32_t* robots);

/* spec JSON: {"dims":[m1,m2] or [m1,m2,m3], "density":0.33,
 *             "obstacles":"none"|"center-hole",
 *             "scenario":"random"|"squares"|"blocks", "seed":0} */
grp_status grp_generate(const char* spec_json, grp_instance** out);

grp_status grp_solve(const grp_instance* ins, const grp_solve_options* opts,
                     grp_plan** out);

/* out_valid: 1/0. out_report_json optional (may be NULL). */
grp_status grp_validate(const grp_instance* ins, const grp_plan* plan,
                        int* out_valid, char** out_report_json);

grp_status grp_refine(const grp_instance* ins, const grp_plan* plan, grp_plan** out);

grp_status grp_metrics_compute(const grp_instance* ins, const grp_plan* plan,
                               grp_metrics* out);

/* Certified makespan lower bounds: max Manhattan distance (default metric)
 * or the stronger obstacle-aware BFS distance when use_bfs != 0. */
grp_status grp_lower_bound(const grp_instance* ins, int use_bfs, int32_t* out);

grp_status grp_fill_virtual(const grp_instance* ins, double target_density,
                            uint64_t seed, grp_instance** out);

/* Removes virtual robots from instance and plan together. */
grp_status grp_strip_virtual(const grp_instance* ins, const grp_plan* plan,
                             grp_instance** out_ins, grp_plan** out_plan);

#ifdef __cplusplus
}
#endif

#endif /* GRPLAN_H */
