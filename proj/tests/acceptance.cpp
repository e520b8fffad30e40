// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. Run through ctest or directly; expects the CLI path in
// GRPLAN_CLI_PATH (compile definition) for the determinism criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "grplan/block_table.hpp"
#include "grplan/json_io.hpp"
#include "grplan/pipeline2d.hpp"
#include "grplan/pipeline3d.hpp"
#include "grplan/refine.hpp"
#include "grplan/scenario.hpp"
#include "grplan/shuffles.hpp"
#include "grplan/unlabeled.hpp"
#include "oracles.hpp"

using namespace grplan;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& label, const std::function<void()>& body) {
  auto start = Clock::now();
  std::string error;
  try {
    body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (error.empty()) {
    std::printf("[PASS] criterion %2d: %s (%.1fs)\n", number, label.c_str(), secs);
  } else {
    std::printf("[FAIL] criterion %2d: %s (%.1fs) -- %s\n", number, label.c_str(), secs,
                error.c_str());
    ++g_failures;
  }
  std::fflush(stdout);
}

[[noreturn]] void bail(const std::string& message) { throw std::runtime_error(message); }

void expect(bool ok, const std::string& message) {
  if (!ok) bail(message);
}

BlockTables& tables() {
  static BlockTables t(BlockTables::default_cache_dir());
  return t;
}

InstanceSpec make_spec(int m1, int m2, int m3, double density, uint64_t seed,
                       Scenario scn = Scenario::Random,
                       ObstaclePattern obs = ObstaclePattern::None) {
  InstanceSpec s;
  s.m1 = m1;
  s.m2 = m2;
  s.m3 = m3;
  s.density = density;
  s.seed = seed;
  s.scenario = scn;
  s.obstacles = obs;
  return s;
}

double third_density(int m1, int m2) {
  return 3.0 * (m1 / 3) * (m2 / 3) / (double(m1) * m2);
}

struct FuzzRun {
  Instance instance;
  Plan plan;
};

// Criterion 1 corpus, reused by criterion 11 for the refinement fuzz.
std::vector<FuzzRun> g_fuzz;

void run_fuzz_corpus() {
  struct Combo {
    const char* algo;
    int m1, m2, m3;
    double density;
    Scenario scn;
    ObstaclePattern obs;
    OddEvenMode mode;
    MatchingHeuristic matching;
    bool refine;
  };
  std::vector<Combo> combos;
  auto add = [&](Combo c) { combos.push_back(c); };

  for (auto [m1, m2] : {std::pair{6, 6}, {9, 6}, {12, 9}, {8, 7}}) {
    add({"grm", m1, m2, 0, 1.0, Scenario::Random, ObstaclePattern::None,
         OddEvenMode::Fast, MatchingHeuristic::Hall, false});
    add({"grm", m1, m2, 0, 1.0, Scenario::Random, ObstaclePattern::None,
         OddEvenMode::Faster, MatchingHeuristic::Lba, true});
  }
  add({"grm", 10, 8, 0, 1.0, Scenario::Random, ObstaclePattern::None, OddEvenMode::Faster,
       MatchingHeuristic::Hall, false});
  add({"grm", 12, 12, 0, 1.0, Scenario::Blocks, ObstaclePattern::None, OddEvenMode::Fast,
       MatchingHeuristic::Hall, true});

  for (auto [m1, m2] : {std::pair{9, 9}, {18, 12}, {15, 9}, {21, 15}, {16, 13}}) {
    add({"grh", m1, m2, 0, third_density(m1, m2), Scenario::Random,
         ObstaclePattern::None, OddEvenMode::Fast, MatchingHeuristic::Hall, false});
    add({"grh", m1, m2, 0, third_density(m1, m2) / 2, Scenario::Random,
         ObstaclePattern::None, OddEvenMode::Fast, MatchingHeuristic::Lba, true});
  }
  add({"grh", 12, 12, 0, 0.25, Scenario::Squares, ObstaclePattern::None,
       OddEvenMode::Fast, MatchingHeuristic::Hall, true});
  add({"grh", 12, 12, 0, 1.0 / 3.0, Scenario::Blocks, ObstaclePattern::None,
       OddEvenMode::Fast, MatchingHeuristic::Lba, false});
  add({"grh", 18, 12, 0, 2.0 / 9.0, Scenario::Random, ObstaclePattern::CenterHole,
       OddEvenMode::Fast, MatchingHeuristic::Hall, false});
  add({"grh", 15, 9, 0, 0.19, Scenario::Random, ObstaclePattern::CenterHole,
       OddEvenMode::Fast, MatchingHeuristic::Lba, true});

  for (auto [m1, m2] : {std::pair{8, 8}, {14, 10}, {16, 12}, {10, 9}}) {
    add({"grlm", m1, m2, 0, 2.0 * (m1 / 2) * (m2 / 2) / (m1 * m2), Scenario::Random,
         ObstaclePattern::None, OddEvenMode::Fast, MatchingHeuristic::Hall, false});
    add({"grlm", m1, m2, 0, 0.3, Scenario::Random, ObstaclePattern::None,
         OddEvenMode::Fast, MatchingHeuristic::Lba, true});
  }

  add({"grh3d", 6, 6, 3, 1.0 / 3.0, Scenario::Random, ObstaclePattern::None,
       OddEvenMode::Fast, MatchingHeuristic::Hall, false});
  add({"grh3d", 9, 6, 3, 1.0 / 3.0, Scenario::Random, ObstaclePattern::None,
       OddEvenMode::Fast, MatchingHeuristic::Lba, true});
  add({"grh3d", 6, 6, 4, 0.25, Scenario::Random, ObstaclePattern::None,
       OddEvenMode::Fast, MatchingHeuristic::Hall, true});
  add({"grm3d", 6, 6, 2, 1.0, Scenario::Random, ObstaclePattern::None, OddEvenMode::Fast,
       MatchingHeuristic::Hall, false});
  add({"grlm3d", 6, 6, 3, 0.5, Scenario::Random, ObstaclePattern::None, OddEvenMode::Fast,
       MatchingHeuristic::Hall, false});

  g_fuzz.clear();
  int runs = 0;
  uint64_t seed = 0;
  while (runs < 500) {
    const Combo& c = combos[runs % combos.size()];
    ++seed;
    Instance ins = generate(
        make_spec(c.m1, c.m2, c.m3, c.density, seed, c.scn, c.obs));
    SolverOptions opt;
    opt.mode = c.mode;
    opt.matching = c.matching;
    opt.refine = c.refine;
    opt.seed = seed;
    Plan plan;
    std::string algo = c.algo;
    if (algo == "grm")
      plan = solve_grm(ins, opt, tables());
    else if (algo == "grh")
      plan = solve_grh(ins, opt);
    else if (algo == "grlm")
      plan = solve_grlm(ins, opt);
    else if (algo == "grh3d")
      plan = solve_grh3d(ins, opt);
    else if (algo == "grm3d")
      plan = solve_grm3d(ins, opt, tables());
    else
      plan = solve_grlm3d(ins, opt);
    ValidationReport report = validate_plan(ins, plan);
    if (!report.valid)
      bail(std::string(c.algo) + " seed " + std::to_string(seed) + ": " +
           report.summary());
    ++runs;
    g_fuzz.push_back({std::move(ins), std::move(plan)});
  }
  expect(runs == 500, "expected exactly 500 runs");
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

int main() {
  criterion(1, "validity fuzz: 500 instances across regimes/solvers/seeds", [] {
    run_fuzz_corpus();
  });

  criterion(2, "full-density bounds: 24x18 fast <= 420, 24x16 faster <= 232", [] {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      auto t0 = Clock::now();
      Instance ins = generate(make_spec(24, 18, 0, 1.0, seed));
      SolverOptions opt;
      opt.seed = seed;
      Plan plan = solve_grm(ins, opt, tables());
      expect(validate_plan(ins, plan).valid, "invalid fast plan");
      int makespan = compute_metrics(ins, plan).makespan;
      expect(makespan <= 7 * (24 + 2 * 18),
             "fast makespan " + std::to_string(makespan) + " > 420");
      double secs = std::chrono::duration<double>(Clock::now() - t0).count();
      expect(secs < 5.0, "fast instance exceeded 5 s");

      t0 = Clock::now();
      Instance ins2 = generate(make_spec(24, 16, 0, 1.0, seed));
      SolverOptions faster = opt;
      faster.mode = OddEvenMode::Faster;
      Plan plan2 = solve_grm(ins2, faster, tables());
      expect(validate_plan(ins2, plan2).valid, "invalid faster plan");
      int makespan2 = compute_metrics(ins2, plan2).makespan;
      expect(makespan2 <= 4 * (24 + 2 * 16) + 8,
             "faster makespan " + std::to_string(makespan2) + " > 232");
      secs = std::chrono::duration<double>(Clock::now() - t0).count();
      expect(secs < 5.0, "faster instance exceeded 5 s");
    }
  });

  criterion(3, "GRH bound on 90x60: plain <= 540 and center-hole 2/9 <= 540", [] {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      auto t0 = Clock::now();
      Instance ins = generate(make_spec(90, 60, 0, 1.0 / 3.0, seed));
      expect(ins.num_robots() == 1800, "expected 1800 robots");
      SolverOptions opt;
      opt.seed = seed;
      Plan plan = solve_grh(ins, opt);
      expect(validate_plan(ins, plan).valid, "invalid plan");
      int makespan = compute_metrics(ins, plan).makespan;
      expect(makespan <= 3 * 90 + 4 * 60 + 30,
             "makespan " + std::to_string(makespan) + " > 540");
      double secs = std::chrono::duration<double>(Clock::now() - t0).count();
      expect(secs < 10.0, "instance exceeded 10 s");

      t0 = Clock::now();
      Instance holed = generate(
          make_spec(90, 60, 0, 2.0 / 9.0 * 9.0 / 8.0, seed, Scenario::Random,
                    ObstaclePattern::CenterHole));
      Plan plan2 = solve_grh(holed, opt);
      expect(validate_plan(holed, plan2).valid, "invalid obstacle plan");
      int makespan2 = compute_metrics(holed, plan2).makespan;
      expect(makespan2 <= 540,
             "obstacle makespan " + std::to_string(makespan2) + " > 540");
      secs = std::chrono::duration<double>(Clock::now() - t0).count();
      expect(secs < 10.0, "obstacle instance exceeded 10 s");
    }
  });

  criterion(4, "GRH ratio trend 30x20 -> 90x60 -> 150x100, <= 2.2; 300x200 smoke", [] {
    std::vector<double> means;
    for (auto [m1, m2] : {std::pair{30, 20}, {90, 60}, {150, 100}}) {
      std::vector<double> ratios;
      for (uint64_t seed = 0; seed < 20; ++seed) {
        Instance ins = generate(make_spec(m1, m2, 0, third_density(m1, m2), seed));
        SolverOptions opt;
        opt.seed = seed;
        Plan plan = solve_grh(ins, opt);
        Metrics m = compute_metrics(ins, plan);
        ratios.push_back(m.optimality_ratio);
      }
      means.push_back(mean(ratios));
    }
    for (size_t i = 1; i < means.size(); ++i)
      expect(means[i] <= means[i - 1] + 1e-9,
             "mean ratio increased between sizes: " + std::to_string(means[i - 1]) +
                 " -> " + std::to_string(means[i]));
    expect(means.back() <= 2.2,
           "mean ratio at 150x100 is " + std::to_string(means.back()));

    auto t0 = Clock::now();
    Instance big = generate(make_spec(300, 200, 0, third_density(300, 200), 1));
    expect(big.num_robots() == 19800, "expected 19800 robots in the smoke run");
    Plan plan = solve_grh(big, {});
    expect(validate_plan(big, plan).valid, "smoke plan invalid");
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    expect(secs < 120.0, "smoke run took " + std::to_string(secs) + " s");
  });

  criterion(5, "GRLM bound on 40x40 at half density", [] {
    auto lg = [](int v) { return int(std::ceil(std::log2(double(v)))); };
    int bound = 3 * 40 + 4 * 40 + 2 * (lg(40) + lg(40)) + 8;
    for (uint64_t seed = 0; seed < 20; ++seed) {
      Instance ins = generate(make_spec(40, 40, 0, 0.5, seed));
      expect(ins.num_robots() == 800, "expected 800 robots");
      SolverOptions opt;
      opt.seed = seed;
      Plan plan = solve_grlm(ins, opt);
      expect(validate_plan(ins, plan).valid, "invalid plan");
      int makespan = compute_metrics(ins, plan).makespan;
      expect(makespan <= bound,
             "makespan " + std::to_string(makespan) + " > " + std::to_string(bound));
    }
  });

  criterion(6, "block tables reproduce the 7/6/6/7/6 maxima; all-swaps 3x2 = 7", [] {
    expect(tables().table_max_steps({3, 2}) == 7, "3x2 maximum is not 7");
    expect(tables().table_max_steps({4, 2}) == 6, "4x2 maximum is not 6");
    expect(tables().table_max_steps({2, 3}) == 6, "2x3 maximum is not 6");
    expect(tables().table_max_steps({3, 3}) == 7, "3x3 maximum is not 7");
    expect(tables().table_max_steps({2, 4}) == 6, "2x4 maximum is not 6");
    SwapPattern all_swaps{{{1, 0}, {1, 0}, {1, 0}}};
    expect(tables().solve_pattern({3, 2}, all_swaps).length() == 7,
           "full 3x2 swap is not 7 steps");
  });

  criterion(7, "line-shuffle bounds for len 4..16", [] {
    std::mt19937_64 rng(404);
    for (int len = 4; len <= 16; ++len) {
      GridSpace g(6, len);
      std::vector<Cell> cur;
      for (int i = 0; i < g.num_cells(); ++i) cur.push_back(g.cell_at(i));
      for (int rep = 0; rep < 10; ++rep) {
        std::vector<int> perm(len);
        std::iota(perm.begin(), perm.end(), 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Cell> target;
        for (const Cell& c : cur) target.push_back(Cell(c.x, perm[c.y - 1]));
        Fragment f = odd_even_shuffle(g, Axis::Row, cur, target, OddEvenMode::Fast,
                                      tables());
        expect(f.steps <= 7 * len, "fast bound violated at len " + std::to_string(len));
        PlanBuilder pb(cur);
        pb.apply(f);
        Instance ins{g, cur, target, {}};
        expect(validate_plan(ins, pb.take()).valid, "invalid odd-even fragment");

        GridSpace band_grid(2, len);
        Band band{Axis::Row, 1, 2, len};
        std::vector<SlotMove> moves;
        std::vector<Cell> start, goal;
        for (int p = 1; p <= len; ++p) {
          moves.push_back({p - 1, p, perm[p - 1]});
          start.push_back(Cell(1, p));
          goal.push_back(Cell(1, perm[p - 1]));
        }
        Fragment merge = linear_merge_shuffle(band_grid, band, moves);
        int bound = len + 2 * (int(std::ceil(std::log2(double(len)))) + 1) + 2;
        expect(merge.steps <= bound, "merge bound violated at len " + std::to_string(len));
        PlanBuilder mb(start);
        mb.apply(merge);
        Instance mins{band_grid, start, goal, {}};
        expect(validate_plan(mins, mb.take()).valid, "invalid merge fragment");
      }
    }
  });

  criterion(8, "matching decomposition on 200 random d-regular multigraphs", [] {
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 200; ++trial) {
      int m = 2 + int(rng() % 63);
      int d = 1 + int(rng() % 8);
      ColorRowMultigraph g = oracles::random_regular_multigraph(m, d, rng);
      MatchingSet ms = decompose_into_matchings(g);
      expect(int(ms.matchings.size()) == d, "wrong matching count");
      std::vector<std::tuple<int, int, int>> a, b;
      for (const auto& e : g.edges) a.emplace_back(e.color, e.row, e.robot);
      for (const auto& match : ms.matchings) {
        std::vector<int> rows(m, 0), colors(m, 0);
        for (const auto& e : match) {
          ++rows[e.row];
          ++colors[e.color];
          b.emplace_back(e.color, e.row, e.robot);
        }
        for (int i = 0; i < m; ++i)
          expect(rows[i] == 1 && colors[i] == 1, "matching not perfect");
      }
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      expect(a == b, "union is not the edge multiset");
    }
  });

  criterion(9, "bottleneck matching equals 7! enumeration on 100 matrices", [] {
    std::mt19937_64 rng(909);
    for (int trial = 0; trial < 100; ++trial) {
      LbaCostMatrix mat;
      mat.costs.assign(7, std::vector<int>(7));
      for (auto& row : mat.costs)
        for (int& v : row) v = int(rng() % 60);
      std::vector<int> match = bottleneck_perfect_matching(mat);
      int worst = 0;
      for (int r = 0; r < 7; ++r) worst = std::max(worst, mat.costs[r][match[r]]);
      expect(worst == oracles::enumerate_bottleneck(mat.costs),
             "bottleneck differs from enumeration");
    }
  });

  criterion(10, "unlabeled optimality: 50 small == BFS; 30x30 horizon <= 12", [] {
    std::mt19937_64 rng(1010);
    for (int trial = 0; trial < 50; ++trial) {
      int m1 = 3 + int(rng() % 3), m2 = 3 + int(rng() % 3);
      GridSpace g(m1, m2);
      int n = 2 + int(rng() % 3);
      std::vector<Cell> cells;
      for (int i = 0; i < g.num_cells(); ++i) cells.push_back(g.cell_at(i));
      std::shuffle(cells.begin(), cells.end(), rng);
      std::vector<Cell> starts(cells.begin(), cells.begin() + n);
      std::shuffle(cells.begin(), cells.end(), rng);
      std::vector<Cell> slots(cells.begin(), cells.begin() + n);
      std::vector<std::pair<int, Cell>> robots;
      for (int i = 0; i < n; ++i) robots.emplace_back(i, starts[i]);
      UnlabeledResult res = solve_unlabeled(g, robots, slots);
      int oracle = oracles::joint_bfs_unlabeled(g, starts, slots, 40);
      expect(oracle >= 0 && res.horizon == oracle,
             "horizon " + std::to_string(res.horizon) + " != oracle " +
                 std::to_string(oracle));
    }
    GridSpace g(30, 30);
    std::vector<Cell> slots = centered::slots(g, 3);
    for (uint64_t seed = 0; seed < 20; ++seed) {
      Instance ins = generate(make_spec(30, 30, 0, 1.0 / 3.0, seed));
      std::vector<std::pair<int, Cell>> robots;
      for (int i = 0; i < ins.num_robots(); ++i) robots.emplace_back(i, ins.starts[i]);
      UnlabeledResult res = solve_unlabeled(g, robots, slots);
      expect(res.horizon <= 12,
             "seed " + std::to_string(seed) + " horizon " + std::to_string(res.horizon));
    }
  });

  criterion(11, "refinement: never worse on 500 plans, order kept, >= 5% on 60x60", [] {
    expect(!g_fuzz.empty(), "fuzz corpus unavailable (criterion 1 failed?)");
    for (const FuzzRun& run : g_fuzz) {
      Metrics before = compute_metrics(run.instance, run.plan);
      Plan refined = refine(run.instance, run.plan);
      expect(validate_plan(run.instance, refined).valid, "refined plan invalid");
      Metrics after = compute_metrics(run.instance, refined);
      expect(after.makespan <= before.makespan, "makespan grew under refinement");
      expect(after.soc <= before.soc, "SOC grew under refinement");
      VisitOrderIndex a = build_visit_order(run.instance, run.plan);
      VisitOrderIndex b = build_visit_order(run.instance, refined);
      expect(a.queues == b.queues, "per-vertex visit order changed");
    }

    double total_gain = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
      Instance ins = generate(make_spec(60, 60, 0, 1.0 / 3.0, seed));
      SolverOptions opt;
      opt.seed = seed;
      Plan plain = solve_grh(ins, opt);
      Plan refined = refine(ins, plain);
      int m0 = compute_metrics(ins, plain).makespan;
      int m1 = compute_metrics(ins, refined).makespan;
      expect(m1 <= m0, "refinement worsened a 60x60 run");
      total_gain += double(m0 - m1) / double(m0);
    }
    double mean_gain = total_gain / 20.0;
    expect(mean_gain >= 0.05,
           "mean makespan reduction " + std::to_string(mean_gain) + " < 5%");

    // ring rotation terminates through the cycle branch
    GridSpace g(3, 3);
    std::vector<Cell> ring{{1, 1}, {1, 2}, {1, 3}, {2, 3},
                           {3, 3}, {3, 2}, {3, 1}, {2, 1}};
    Instance ins{g, ring, {}, {}};
    Plan p;
    p.horizon = 2;
    for (int i = 0; i < 8; ++i) {
      ins.goals.push_back(ring[(i + 2) % 8]);
      p.paths.push_back({ring[i], ring[(i + 1) % 8], ring[(i + 2) % 8]});
    }
    Plan r = refine(ins, p);
    expect(validate_plan(ins, r).valid && compute_metrics(ins, r).makespan == 2,
           "ring rotation mishandled");
  });

  criterion(12, "LBA matching: mean makespan <= plain GRH on 60x60", [] {
    double plain_sum = 0, lba_sum = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
      Instance ins = generate(make_spec(60, 60, 0, 1.0 / 3.0, seed));
      SolverOptions opt;
      opt.seed = seed;
      plain_sum += compute_metrics(ins, solve_grh(ins, opt)).makespan;
      SolverOptions lba = opt;
      lba.matching = MatchingHeuristic::Lba;
      lba_sum += compute_metrics(ins, solve_grh(ins, lba)).makespan;
    }
    expect(lba_sum <= plain_sum, "LBA mean makespan " + std::to_string(lba_sum / 20) +
                                     " > plain " + std::to_string(plain_sum / 20));
  });

  criterion(13, "GRH3D: 24x12x6 bound 184 and ratio trend from 12x6x3", [] {
    std::vector<double> small_ratios, large_ratios;
    for (uint64_t seed = 0; seed < 10; ++seed) {
      Instance small = generate(make_spec(12, 6, 3, 1.0 / 3.0, seed));
      SolverOptions opt;
      opt.seed = seed;
      Plan sp = solve_grh3d(small, opt);
      expect(validate_plan(small, sp).valid, "12x6x3 plan invalid");
      small_ratios.push_back(compute_metrics(small, sp).optimality_ratio);

      Instance big = generate(make_spec(24, 12, 6, 1.0 / 3.0, seed));
      expect(big.num_robots() == 576, "expected 576 robots");
      Plan bp = solve_grh3d(big, opt);
      expect(validate_plan(big, bp).valid, "24x12x6 plan invalid");
      Metrics m = compute_metrics(big, bp);
      expect(m.makespan <= 3 * 24 + 4 * 12 + 4 * 6 + 40,
             "makespan " + std::to_string(m.makespan) + " > 184");
      large_ratios.push_back(m.optimality_ratio);
    }
    expect(mean(large_ratios) <= mean(small_ratios) + 1e-9,
           "ratio did not improve with scale: " + std::to_string(mean(small_ratios)) +
               " -> " + std::to_string(mean(large_ratios)));
  });

  criterion(14, "determinism: two CLI invocations produce identical plan JSON", [] {
#ifdef GRPLAN_CLI_PATH
    std::string cli = GRPLAN_CLI_PATH;
    std::string dir = "acceptance-tmp";
    std::string setup = "mkdir -p " + dir;
    expect(std::system(setup.c_str()) == 0, "mkdir failed");
    std::string gen = cli + " gen --dims 18x12 --density 0.3333333333333333 --seed 5 --out " +
                      dir + "/ins.json";
    expect(std::system(gen.c_str()) == 0, "gen failed");
    for (int run = 0; run < 2; ++run) {
      std::string cmd = cli + " solve --algo grh --seed 9 --refine --in " + dir +
                        "/ins.json --out " + dir + "/plan" + std::to_string(run) +
                        ".json";
      expect(std::system(cmd.c_str()) == 0, "solve failed");
    }
    std::string a = read_file(dir + "/plan0.json");
    std::string b = read_file(dir + "/plan1.json");
    expect(!a.empty() && a == b, "plan JSON differs between invocations");
#else
    bail("CLI path not configured");
#endif
  });

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
