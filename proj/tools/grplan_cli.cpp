// Command-line front end for the grid rearrangement planner. All solver
// work goes through the C API in grplan.h.
#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "grplan.h"

namespace {

struct Cleanup {
  std::vector<grp_instance*> instances;
  std::vector<grp_plan*> plans;
  std::vector<char*> strings;
  ~Cleanup() {
    for (auto* p : instances) grp_instance_free(p);
    for (auto* p : plans) grp_plan_free(p);
    for (auto* s : strings) grp_string_free(s);
  }
};

[[noreturn]] void die(const std::string& context) {
  std::cerr << "error: " << context;
  const char* detail = grp_last_error();
  if (detail && *detail) std::cerr << ": " << detail;
  std::cerr << "\n";
  std::exit(1);
}

std::string read_input(const std::string& path) {
  if (path == "-" || path.empty()) {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream is(path);
  if (!is) die("cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-" || path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream os(path);
  if (!os) die("cannot write " + path);
  os << text << "\n";
}

bool parse_dims(const std::string& text, int* m1, int* m2, int* m3) {
  *m1 = *m2 = *m3 = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%dx%dx%d%c", m1, m2, m3, &extra) == 3) return true;
  if (std::sscanf(text.c_str(), "%dx%d%c", m1, m2, &extra) == 2) return true;
  return false;
}

std::string spec_json(int m1, int m2, int m3, double density,
                      const std::string& obstacles, const std::string& scenario,
                      uint64_t seed) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"dims\":[" << m1 << "," << m2;
  if (m3 > 0) os << "," << m3;
  os << "],\"density\":" << density << ",\"obstacles\":\"" << obstacles
     << "\",\"scenario\":\"" << scenario << "\",\"seed\":" << seed << "}";
  return os.str();
}

int algo_from_name(const std::string& name) {
  if (name == "grm") return GRP_ALGO_GRM;
  if (name == "grh") return GRP_ALGO_GRH;
  if (name == "grlm") return GRP_ALGO_GRLM;
  if (name == "grh3d") return GRP_ALGO_GRH3D;
  if (name == "grm3d") return GRP_ALGO_GRM3D;
  if (name == "grlm3d") return GRP_ALGO_GRLM3D;
  return -1;
}

// Regime density implied by the algorithm: the exact slot capacity of the
// complete-band region divided by the free cell count.
double algo_density(const std::string& name, const std::string& obstacles, int m1,
                    int m2, int m3) {
  double cells = double(m1) * m2 * (m3 > 0 ? m3 : 1);
  if (name == "grm" || name == "grm3d") return 1.0;
  if (name == "grlm") return 2.0 * (m1 / 2) * (m2 / 2) / cells;
  if (name == "grlm3d") return double(m1) * (m2 / 2) * m3 / cells;
  if (name == "grh3d") return 3.0 * (m1 / 3) * (m2 / 3) * m3 / cells;
  if (obstacles == "center-hole") {
    double holes = double(m1 / 3) * (m2 / 3);
    return 2.0 * holes / (cells - holes);
  }
  return 3.0 * (m1 / 3) * (m2 / 3) / cells;
}

// Documented per-algorithm makespan bound; <0 when none applies.
double algo_bound(const std::string& name, bool faster, int m1, int m2, int m3) {
  auto lg = [](int v) { return int(std::ceil(std::log2(double(v)))); };
  if (name == "grm") return faster ? 4.0 * (m1 + 2 * m2) + 8 : 7.0 * (m1 + 2 * m2);
  if (name == "grh") return 3.0 * m1 + 4.0 * m2 + 30;
  if (name == "grlm") return 3.0 * m1 + 4.0 * m2 + 2.0 * (lg(m1) + lg(m2)) + 8;
  if (name == "grh3d") return 3.0 * m1 + 4.0 * m2 + 4.0 * m3 + 40;
  return -1.0;
}

struct SolveFlags {
  std::string algo = "grh";
  std::string mode = "fast";
  std::string matching = "hall";
  std::string lb = "manhattan";
  bool refine = false;
  bool column_first = false;
  uint64_t seed = 0;
  std::string cache_dir;

  grp_solve_options to_options() const {
    grp_solve_options o{};
    o.algo = grp_algo(algo_from_name(algo));
    o.faster_mode = mode == "faster" ? 1 : 0;
    o.lba_matching = matching == "lba" ? 1 : 0;
    o.refine = refine ? 1 : 0;
    o.column_first = column_first ? 1 : 0;
    o.seed = seed;
    o.cache_dir = cache_dir.empty() ? nullptr : cache_dir.c_str();
    return o;
  }
};

void add_solve_flags(CLI::App* cmd, SolveFlags& flags) {
  cmd->add_option("--algo", flags.algo, "grm|grh|grlm|grh3d|grm3d|grlm3d")
      ->check(CLI::IsMember({"grm", "grh", "grlm", "grh3d", "grm3d", "grlm3d"}));
  cmd->add_option("--mode", flags.mode, "fast|faster (full density)")
      ->check(CLI::IsMember({"fast", "faster"}));
  cmd->add_option("--matching", flags.matching, "hall|lba")
      ->check(CLI::IsMember({"hall", "lba"}));
  cmd->add_flag("--refine", flags.refine, "apply visit-order path refinement");
  cmd->add_flag("--column-first", flags.column_first, "transposed shuffle order");
  cmd->add_option("--seed", flags.seed, "virtual filling seed");
  cmd->add_option("--cache-dir", flags.cache_dir, "block table cache directory");
  cmd->add_option("--lb", flags.lb, "lower bound for reported ratios: manhattan|bfs")
      ->check(CLI::IsMember({"manhattan", "bfs"}));
}

int run_gen(const std::string& dims, double density, const std::string& obstacles,
            const std::string& scenario, uint64_t seed, const std::string& out) {
  int m1, m2, m3;
  if (!parse_dims(dims, &m1, &m2, &m3)) die("bad --dims, expected m1xm2 or m1xm2xm3");
  Cleanup c;
  grp_instance* ins = nullptr;
  if (grp_generate(spec_json(m1, m2, m3, density, obstacles, scenario, seed).c_str(),
                   &ins) != GRP_OK)
    die("generate failed");
  c.instances.push_back(ins);
  char* json = nullptr;
  if (grp_instance_to_json(ins, 0, &json) != GRP_OK) die("serialization failed");
  c.strings.push_back(json);
  write_output(out, json);
  return 0;
}

int run_solve(const SolveFlags& flags, const std::string& in, const std::string& plan_out,
              bool print_metrics) {
  Cleanup c;
  grp_instance* ins = nullptr;
  if (grp_instance_from_json(read_input(in).c_str(), &ins) != GRP_OK)
    die("instance parse failed");
  c.instances.push_back(ins);

  grp_solve_options opts = flags.to_options();
  grp_plan* plan = nullptr;
  if (grp_solve(ins, &opts, &plan) != GRP_OK) die("solve failed");
  c.plans.push_back(plan);

  int valid = 0;
  if (grp_validate(ins, plan, &valid, nullptr) != GRP_OK) die("validation failed");
  if (!valid) die("solver produced an invalid plan");

  char* json = nullptr;
  if (grp_plan_to_json(plan, 0, &json) != GRP_OK) die("serialization failed");
  c.strings.push_back(json);
  write_output(plan_out, json);

  if (print_metrics) {
    grp_metrics m{};
    if (grp_metrics_compute(ins, plan, &m) != GRP_OK) die("metrics failed");
    if (flags.lb == "bfs") {
      int32_t lb = 0;
      if (grp_lower_bound(ins, 1, &lb) != GRP_OK) die("lower bound failed");
      m.lower_bound = lb;
      m.optimality_ratio = lb > 0 ? double(m.makespan) / lb : 1.0;
    }
    std::cerr << "makespan=" << m.makespan << " soc=" << m.soc
              << " lower_bound=" << m.lower_bound << " ratio=" << m.optimality_ratio
              << "\n";
  }
  return 0;
}

int run_validate(const std::string& in, const std::string& plan_path) {
  Cleanup c;
  grp_instance* ins = nullptr;
  if (grp_instance_from_json(read_input(in).c_str(), &ins) != GRP_OK)
    die("instance parse failed");
  c.instances.push_back(ins);
  grp_plan* plan = nullptr;
  if (grp_plan_from_json(read_input(plan_path).c_str(), &plan) != GRP_OK)
    die("plan parse failed");
  c.plans.push_back(plan);
  int valid = 0;
  char* report = nullptr;
  if (grp_validate(ins, plan, &valid, &report) != GRP_OK) die("validation failed");
  c.strings.push_back(report);
  std::cout << report << "\n";
  return valid ? 0 : 1;
}

int run_refine(const std::string& in, const std::string& plan_path,
               const std::string& out) {
  Cleanup c;
  grp_instance* ins = nullptr;
  if (grp_instance_from_json(read_input(in).c_str(), &ins) != GRP_OK)
    die("instance parse failed");
  c.instances.push_back(ins);
  grp_plan* plan = nullptr;
  if (grp_plan_from_json(read_input(plan_path).c_str(), &plan) != GRP_OK)
    die("plan parse failed");
  c.plans.push_back(plan);
  grp_plan* refined = nullptr;
  if (grp_refine(ins, plan, &refined) != GRP_OK) die("refine failed");
  c.plans.push_back(refined);
  char* json = nullptr;
  if (grp_plan_to_json(refined, 0, &json) != GRP_OK) die("serialization failed");
  c.strings.push_back(json);
  write_output(out, json);
  return 0;
}

struct BenchRow {
  std::string text;
  bool failed_validation = false;
};

int run_bench(const std::vector<std::string>& dims_list,
              const std::vector<std::string>& algos, int seeds, uint64_t seed0,
              double density, const std::string& obstacles, const std::string& scenario,
              const SolveFlags& base_flags, int threads, const std::string& out) {
  struct Job {
    std::string dims, algo;
    uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& d : dims_list)
    for (const auto& a : algos)
      for (int s = 0; s < seeds; ++s) jobs.push_back({d, a, seed0 + uint64_t(s)});

  std::vector<BenchRow> rows(jobs.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> abort_sweep{false};
  std::string abort_reason;
  std::mutex abort_mutex;

  auto worker = [&]() {
    while (!abort_sweep.load()) {
      size_t idx = next.fetch_add(1);
      if (idx >= jobs.size()) return;
      const Job& job = jobs[idx];
      Cleanup c;
      int m1, m2, m3;
      if (!parse_dims(job.dims, &m1, &m2, &m3)) {
        std::lock_guard<std::mutex> lock(abort_mutex);
        abort_reason = "bad dims " + job.dims;
        abort_sweep = true;
        return;
      }
      double d = density > 0 ? density : algo_density(job.algo, obstacles, m1, m2, m3);
      grp_instance* ins = nullptr;
      if (grp_generate(
              spec_json(m1, m2, m3, d, obstacles, scenario, job.seed).c_str(), &ins) !=
          GRP_OK) {
        std::lock_guard<std::mutex> lock(abort_mutex);
        abort_reason = std::string("generate failed: ") + grp_last_error();
        abort_sweep = true;
        return;
      }
      c.instances.push_back(ins);

      std::ostringstream row;
      // digest mirrors the spec fields that define the instance
      std::ostringstream spec_text;
      spec_text << job.dims << "|" << d << "|" << obstacles << "|" << scenario << "|"
                << job.seed;
      uint64_t h = 1469598103934665603ull;
      for (char ch : spec_text.str()) {
        h ^= uint64_t(uint8_t(ch));
        h *= 1099511628211ull;
      }
      row << std::hex << h << std::dec << "," << job.algo << "," << job.seed << ",";

      SolveFlags flags = base_flags;
      flags.algo = job.algo;
      flags.seed = job.seed;
      grp_solve_options opts = flags.to_options();
      grp_plan* plan = nullptr;
      auto t0 = std::chrono::steady_clock::now();
      grp_status st = grp_solve(ins, &opts, &plan);
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
      if (st == GRP_ERR_REGIME) {
        row << ",,,,," << secs << ",regime-error";
        rows[idx].text = row.str();
        continue;
      }
      if (st != GRP_OK) {
        std::lock_guard<std::mutex> lock(abort_mutex);
        abort_reason = std::string("solve failed: ") + grp_last_error();
        abort_sweep = true;
        return;
      }
      c.plans.push_back(plan);
      int valid = 0;
      char* report = nullptr;
      if (grp_validate(ins, plan, &valid, &report) != GRP_OK || !valid) {
        rows[idx].failed_validation = true;
        std::lock_guard<std::mutex> lock(abort_mutex);
        abort_reason = "invalid plan for " + job.dims + "/" + job.algo + "/seed " +
                       std::to_string(job.seed) +
                       (report ? std::string(": ") + report : std::string());
        if (report) grp_string_free(report);
        abort_sweep = true;
        return;
      }
      if (report) grp_string_free(report);
      grp_metrics m{};
      if (grp_metrics_compute(ins, plan, &m) != GRP_OK) {
        std::lock_guard<std::mutex> lock(abort_mutex);
        abort_reason = std::string("metrics failed: ") + grp_last_error();
        abort_sweep = true;
        return;
      }
      double bound = algo_bound(job.algo, flags.mode == "faster", m1, m2, m3);
      row << m.makespan << "," << m.soc << "," << m.lower_bound << ","
          << m.optimality_ratio << "," << bound << "," << secs << ","
          << (bound < 0 ? "n/a" : (m.makespan <= bound ? "yes" : "no"));
      rows[idx].text = row.str();
    }
  };

  int nthreads = threads > 0 ? threads : int(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (abort_sweep) die("bench aborted: " + abort_reason);

  std::ostringstream csv;
  csv << "spec,algorithm,seed,makespan,soc,lower_bound,ratio,bound,runtime_s,"
         "bound_satisfied\n";
  for (const auto& r : rows) csv << r.text << "\n";
  write_output(out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid rearrangement multi-robot path planner"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance");
  std::string gen_dims = "30x30", gen_obstacles = "none", gen_scenario = "random";
  std::string gen_out = "-";
  double gen_density = 1.0 / 3.0;
  uint64_t gen_seed = 0;
  gen->add_option("--dims", gen_dims, "m1xm2 or m1xm2xm3")->required();
  gen->add_option("--density", gen_density, "robot density in [0,1]");
  gen->add_option("--obstacles", gen_obstacles, "none|center-hole")
      ->check(CLI::IsMember({"none", "center-hole"}));
  gen->add_option("--scenario", gen_scenario, "random|squares|blocks")
      ->check(CLI::IsMember({"random", "squares", "blocks"}));
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output file (- = stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance");
  SolveFlags solve_flags;
  std::string solve_in = "-", solve_out = "-";
  bool solve_metrics = false;
  add_solve_flags(solve, solve_flags);
  solve->add_option("--in", solve_in, "instance JSON (- = stdin)");
  solve->add_option("--out", solve_out, "plan JSON output (- = stdout)");
  solve->add_flag("--metrics", solve_metrics, "print metrics to stderr");

  // validate
  auto* validate = app.add_subcommand("validate", "validate a plan");
  std::string val_in = "-", val_plan;
  validate->add_option("--in", val_in, "instance JSON (- = stdin)");
  validate->add_option("--plan", val_plan, "plan JSON")->required();

  // refine
  auto* refine = app.add_subcommand("refine", "refine a plan");
  std::string ref_in = "-", ref_plan, ref_out = "-";
  refine->add_option("--in", ref_in, "instance JSON (- = stdin)");
  refine->add_option("--plan", ref_plan, "plan JSON")->required();
  refine->add_option("--out", ref_out, "refined plan output");

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark sweep to CSV");
  std::vector<std::string> bench_dims, bench_algos{"grh"};
  int bench_seeds = 20, bench_threads = 0;
  uint64_t bench_seed0 = 0;
  double bench_density = -1.0;
  std::string bench_obstacles = "none", bench_scenario = "random", bench_out = "-";
  SolveFlags bench_flags;
  bench->add_option("--dims", bench_dims, "grid sizes, e.g. 30x20 60x40");
  bench->add_option("--algo", bench_algos, "algorithms to run");
  bench->add_option("--seeds", bench_seeds, "number of seeds per combination");
  bench->add_option("--seed0", bench_seed0, "first seed");
  bench->add_option("--density", bench_density,
                    "robot density (default: the algorithm's regime density)");
  bench->add_option("--obstacles", bench_obstacles, "none|center-hole")
      ->check(CLI::IsMember({"none", "center-hole"}));
  bench->add_option("--scenario", bench_scenario, "random|squares|blocks")
      ->check(CLI::IsMember({"random", "squares", "blocks"}));
  bench->add_option("--mode", bench_flags.mode, "fast|faster")
      ->check(CLI::IsMember({"fast", "faster"}));
  bench->add_option("--matching", bench_flags.matching, "hall|lba")
      ->check(CLI::IsMember({"hall", "lba"}));
  bench->add_flag("--refine", bench_flags.refine, "refine plans");
  bench->add_option("--cache-dir", bench_flags.cache_dir, "block table cache");
  bench->add_option("--threads", bench_threads, "worker threads (0 = hardware)");
  bench->add_option("--out", bench_out, "CSV output (- = stdout)");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed())
    return run_gen(gen_dims, gen_density, gen_obstacles, gen_scenario, gen_seed, gen_out);
  if (solve->parsed()) return run_solve(solve_flags, solve_in, solve_out, solve_metrics);
  if (validate->parsed()) return run_validate(val_in, val_plan);
  if (refine->parsed()) return run_refine(ref_in, ref_plan, ref_out);
  if (bench->parsed())
    return run_bench(bench_dims, bench_algos, bench_seeds, bench_seed0, bench_density,
                     bench_obstacles, bench_scenario, bench_flags, bench_threads,
                     bench_out);
  return 0;
}
