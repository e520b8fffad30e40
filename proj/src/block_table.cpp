#include "grplan/block_table.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <fstream>

namespace grplan {

namespace {

constexpr uint32_t kCacheMagic = 0x54425247;  // "GRBT"
constexpr uint32_t kCacheVersion = 1;

const long long kFact[13] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320,
                             362880, 3628800, 39916800, 479001600};

void check_shape(const BlockShape& s) {
  if (s.rows < 2 || s.rows > 4 || s.cols < 2 || s.cols > 4)
    throw StructuralError("block rows/cols must be in {2,3,4}");
}

// Packed configuration: nibble c holds the item currently at cell c.
// Identity: item i at cell i.
uint64_t packed_identity(int k) {
  uint64_t p = 0;
  for (int c = 0; c < k; ++c) p |= uint64_t(c) << (4 * c);
  return p;
}

inline uint64_t apply_perm(uint64_t packed, const std::vector<uint8_t>& perm, int k) {
  uint64_t out = 0;
  for (int c = 0; c < k; ++c)
    out |= ((packed >> (4 * c)) & 0xF) << (4 * perm[c]);
  return out;
}

// Lexicographic rank of the packed permutation, for dense table indexing.
uint32_t lehmer_rank(uint64_t packed, int k) {
  uint32_t rank = 0;
  for (int i = 0; i < k; ++i) {
    int vi = int((packed >> (4 * i)) & 0xF);
    int smaller = 0;
    for (int j = i + 1; j < k; ++j)
      if (int((packed >> (4 * j)) & 0xF) < vi) ++smaller;
    rank += uint32_t(smaller * kFact[k - 1 - i]);
  }
  return rank;
}

std::vector<uint8_t> move_perm(const ParallelMove& m, int k) {
  std::vector<uint8_t> perm(k);
  for (int c = 0; c < k; ++c) perm[c] = uint8_t(c);
  for (const CycleMove& cy : m.cycles)
    for (size_t i = 0; i < cy.cells.size(); ++i)
      perm[cy.cells[i]] = cy.cells[(i + 1) % cy.cells.size()];
  return perm;
}

ParallelMove invert_move(const ParallelMove& m) {
  ParallelMove inv;
  for (const CycleMove& cy : m.cycles) {
    CycleMove r;
    r.cells.assign(cy.cells.rbegin(), cy.cells.rend());
    inv.cycles.push_back(std::move(r));
  }
  return inv;
}

std::vector<std::vector<int>> block_adjacency(const BlockShape& s) {
  std::vector<std::vector<int>> adj(s.cells());
  for (int r = 0; r < s.rows; ++r)
    for (int c = 0; c < s.cols; ++c) {
      int v = r * s.cols + c;
      if (c + 1 < s.cols) {
        adj[v].push_back(v + 1);
        adj[v + 1].push_back(v);
      }
      if (r + 1 < s.rows) {
        adj[v].push_back(v + s.cols);
        adj[v + s.cols].push_back(v);
      }
    }
  return adj;
}

// All simple cycles, each recorded once with its minimum vertex first and a
// fixed traversal direction (second vertex < last vertex).
std::vector<std::vector<uint8_t>> enumerate_cycles(const BlockShape& s) {
  auto adj = block_adjacency(s);
  const int k = s.cells();
  std::vector<std::vector<uint8_t>> cycles;
  std::vector<uint8_t> path;
  std::vector<uint8_t> in_path(k, 0);

  std::function<void(int, int)> dfs = [&](int start, int v) {
    for (int w : adj[v]) {
      if (w == start && path.size() >= 4) {
        if (path[1] < path.back()) cycles.push_back(path);
      } else if (w > start && !in_path[w]) {
        path.push_back(uint8_t(w));
        in_path[w] = 1;
        dfs(start, w);
        in_path[w] = 0;
        path.pop_back();
      }
    }
  };
  for (int start = 0; start < k; ++start) {
    path.assign(1, uint8_t(start));
    std::fill(in_path.begin(), in_path.end(), 0);
    in_path[start] = 1;
    dfs(start, start);
  }
  return cycles;
}

}  // namespace

bool SwapPattern::is_identity() const {
  for (const auto& row : per_row)
    for (int c = 0; c < int(row.size()); ++c)
      if (row[c] != c) return false;
  return true;
}

std::vector<ParallelMove> legal_parallel_moves(const BlockShape& shape) {
  check_shape(shape);
  auto cycles = enumerate_cycles(shape);

  std::vector<uint16_t> masks(cycles.size(), 0);
  for (size_t i = 0; i < cycles.size(); ++i)
    for (uint8_t v : cycles[i]) masks[i] |= uint16_t(1) << v;

  std::vector<ParallelMove> moves;
  std::vector<int> chosen;
  // Non-empty subsets of pairwise vertex-disjoint cycles, every orientation
  // combination of each subset.
  std::function<void(size_t, uint16_t)> gen = [&](size_t idx, uint16_t used) {
    for (size_t i = idx; i < cycles.size(); ++i) {
      if (masks[i] & used) continue;
      chosen.push_back(int(i));
      int combos = 1 << chosen.size();
      for (int o = 0; o < combos; ++o) {
        ParallelMove m;
        for (size_t j = 0; j < chosen.size(); ++j) {
          CycleMove cy;
          const auto& cells = cycles[chosen[j]];
          if (o & (1 << j))
            cy.cells.assign(cells.rbegin(), cells.rend());
          else
            cy.cells = cells;
          m.cycles.push_back(std::move(cy));
        }
        moves.push_back(std::move(m));
      }
      gen(i + 1, uint16_t(used | masks[i]));
      chosen.pop_back();
    }
  };
  gen(0, 0);
  return moves;
}

long long pattern_count(const BlockShape& shape) {
  check_shape(shape);
  long long n = 1;
  for (int r = 0; r < shape.rows; ++r) n *= kFact[shape.cols];
  return n;
}

namespace {

int perm_rank(const std::vector<int>& perm) {
  int n = int(perm.size());
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (perm[j] < perm[i]) ++smaller;
    rank += smaller * int(kFact[n - 1 - i]);
  }
  return rank;
}

std::vector<int> perm_unrank(int n, int rank) {
  std::vector<int> pool(n), perm;
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = n; i >= 1; --i) {
    int f = int(kFact[i - 1]);
    int idx = rank / f;
    rank %= f;
    perm.push_back(pool[idx]);
    pool.erase(pool.begin() + idx);
  }
  return perm;
}

void check_pattern(const BlockShape& shape, const SwapPattern& p) {
  if (int(p.per_row.size()) != shape.rows)
    throw StructuralError("pattern row count differs from shape");
  for (const auto& row : p.per_row) {
    if (int(row.size()) != shape.cols)
      throw StructuralError("pattern row width differs from shape");
    std::vector<uint8_t> seen(shape.cols, 0);
    for (int v : row) {
      if (v < 0 || v >= shape.cols || seen[v])
        throw StructuralError("pattern row is not a permutation");
      seen[v] = 1;
    }
  }
}

// Target configuration reached from identity: the item starting at (r, c)
// ends at (r, sigma_r(c)).
uint64_t pattern_target(const BlockShape& shape, const SwapPattern& p) {
  uint64_t t = 0;
  for (int r = 0; r < shape.rows; ++r)
    for (int c = 0; c < shape.cols; ++c) {
      int item = r * shape.cols + c;
      int dest = r * shape.cols + p.per_row[r][c];
      t |= uint64_t(item) << (4 * dest);
    }
  return t;
}

}  // namespace

uint32_t pattern_id(const BlockShape& shape, const SwapPattern& pattern) {
  check_pattern(shape, pattern);
  uint32_t id = 0;
  uint32_t base = uint32_t(kFact[shape.cols]);
  for (int r = shape.rows - 1; r >= 0; --r)
    id = id * base + uint32_t(perm_rank(pattern.per_row[r]));
  return id;
}

SwapPattern pattern_from_id(const BlockShape& shape, uint32_t id) {
  SwapPattern p;
  uint32_t base = uint32_t(kFact[shape.cols]);
  for (int r = 0; r < shape.rows; ++r) {
    p.per_row.push_back(perm_unrank(shape.cols, int(id % base)));
    id /= base;
  }
  return p;
}

std::vector<int> apply_solution(const BlockShape& shape, const BlockSolution& sol) {
  const int k = shape.cells();
  uint64_t cfg = packed_identity(k);
  for (const ParallelMove& m : sol.steps) {
    std::vector<uint8_t> used(k, 0);
    for (const CycleMove& cy : m.cycles) {
      if (cy.cells.size() < 4) throw StructuralError("cycle shorter than grid girth");
      for (uint8_t v : cy.cells) {
        if (v >= k || used[v]) throw StructuralError("overlapping or out-of-range cycle");
        used[v] = 1;
      }
    }
    cfg = apply_perm(cfg, move_perm(m, k), k);
  }
  std::vector<int> where(k);
  for (int c = 0; c < k; ++c) where[int((cfg >> (4 * c)) & 0xF)] = c;
  return where;
}

// ---------------------------------------------------------------------------
// Exhaustive per-shape tables.

struct BlockTables::ShapeTable {
  BlockShape shape;
  std::vector<ParallelMove> moves;
  std::vector<std::vector<uint8_t>> perms;      // per move
  std::vector<std::vector<uint8_t>> inv_perms;  // per move
  std::vector<uint8_t> dist;                    // by lehmer rank; 0xFF unreachable
  std::vector<uint8_t> via;                     // move id from BFS parent
  std::map<uint32_t, BlockSolution> table;      // pattern id -> solution
  bool table_complete = false;

  void bfs() {
    const int k = shape.cells();
    moves = legal_parallel_moves(shape);
    if (moves.size() > 254) throw StructuralError("move id does not fit in a byte");
    perms.clear();
    inv_perms.clear();
    for (const ParallelMove& m : moves) {
      perms.push_back(move_perm(m, k));
      inv_perms.push_back(move_perm(invert_move(m), k));
    }
    size_t space = size_t(kFact[k]);
    dist.assign(space, 0xFF);
    via.assign(space, 0xFF);
    uint64_t id0 = packed_identity(k);
    dist[lehmer_rank(id0, k)] = 0;
    std::vector<uint64_t> frontier{id0}, next;
    uint8_t d = 0;
    while (!frontier.empty()) {
      ++d;
      next.clear();
      for (uint64_t s : frontier) {
        for (size_t mi = 0; mi < moves.size(); ++mi) {
          uint64_t ns = apply_perm(s, perms[mi], k);
          uint32_t r = lehmer_rank(ns, k);
          if (dist[r] == 0xFF) {
            dist[r] = d;
            via[r] = uint8_t(mi);
            next.push_back(ns);
          }
        }
      }
      frontier.swap(next);
    }
  }

  BlockSolution extract(uint64_t target) const {
    const int k = shape.cells();
    BlockSolution sol;
    uint32_t r = lehmer_rank(target, k);
    if (dist[r] == 0xFF)
      throw SolverError("pattern unreachable under full occupancy");
    uint64_t cur = target;
    while (cur != packed_identity(k)) {
      uint8_t mi = via[lehmer_rank(cur, k)];
      sol.steps.push_back(moves[mi]);
      cur = apply_perm(cur, inv_perms[mi], k);
    }
    std::reverse(sol.steps.begin(), sol.steps.end());
    return sol;
  }

  void build_table() {
    long long count = pattern_count(shape);
    table_complete = true;
    for (long long id = 0; id < count; ++id) {
      SwapPattern p = pattern_from_id(shape, uint32_t(id));
      uint64_t target = pattern_target(shape, p);
      if (dist[lehmer_rank(target, shape.cells())] == 0xFF) {
        table_complete = false;
        continue;
      }
      table[uint32_t(id)] = extract(target);
    }
  }
};

// ---------------------------------------------------------------------------
// Disk cache. Little-endian binary:
//   header: magic u32, version u32, rows u8, cols u8, entry count u32
//   entry:  pattern id u32, step count u8,
//           per step: cycle count u8, per cycle: length u8, cells u8[length]

namespace {

template <typename T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool get(std::ifstream& is, T* v) {
  is.read(reinterpret_cast<char*>(v), sizeof(T));
  return bool(is);
}

bool write_table_file(const std::string& path, const BlockShape& shape,
                      const std::map<uint32_t, BlockSolution>& table) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) return false;
  put(os, kCacheMagic);
  put(os, kCacheVersion);
  put(os, uint8_t(shape.rows));
  put(os, uint8_t(shape.cols));
  put(os, uint32_t(table.size()));
  for (const auto& [id, sol] : table) {
    put(os, id);
    put(os, uint8_t(sol.steps.size()));
    for (const ParallelMove& m : sol.steps) {
      put(os, uint8_t(m.cycles.size()));
      for (const CycleMove& cy : m.cycles) {
        put(os, uint8_t(cy.cells.size()));
        os.write(reinterpret_cast<const char*>(cy.cells.data()),
                 std::streamsize(cy.cells.size()));
      }
    }
  }
  return bool(os);
}

bool read_table_file(const std::string& path, const BlockShape& shape,
                     std::map<uint32_t, BlockSolution>* table) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return false;
  uint32_t magic = 0, version = 0, count = 0;
  uint8_t rows = 0, cols = 0;
  if (!get(is, &magic) || magic != kCacheMagic) return false;
  if (!get(is, &version) || version != kCacheVersion) return false;
  if (!get(is, &rows) || !get(is, &cols)) return false;
  if (rows != shape.rows || cols != shape.cols) return false;
  if (!get(is, &count)) return false;
  std::map<uint32_t, BlockSolution> out;
  for (uint32_t e = 0; e < count; ++e) {
    uint32_t id = 0;
    uint8_t steps = 0;
    if (!get(is, &id) || !get(is, &steps)) return false;
    if (id >= pattern_count(shape)) return false;
    BlockSolution sol;
    for (int sidx = 0; sidx < steps; ++sidx) {
      uint8_t ncy = 0;
      if (!get(is, &ncy)) return false;
      ParallelMove m;
      for (int c = 0; c < ncy; ++c) {
        uint8_t len = 0;
        if (!get(is, &len)) return false;
        if (len < 4 || len > shape.cells()) return false;
        CycleMove cy;
        cy.cells.resize(len);
        is.read(reinterpret_cast<char*>(cy.cells.data()), len);
        if (!is) return false;
        m.cycles.push_back(std::move(cy));
      }
      sol.steps.push_back(std::move(m));
    }
    out[id] = std::move(sol);
  }
  table->swap(out);
  return true;
}

// A cached solution must actually realize its pattern.
bool verify_entry(const BlockShape& shape, uint32_t id, const BlockSolution& sol) {
  SwapPattern p = pattern_from_id(shape, id);
  std::vector<int> where;
  try {
    where = apply_solution(shape, sol);
  } catch (const SolverError&) {
    return false;
  }
  for (int r = 0; r < shape.rows; ++r)
    for (int c = 0; c < shape.cols; ++c)
      if (where[r * shape.cols + c] != r * shape.cols + p.per_row[r][c]) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

BlockTables::BlockTables(std::string cache_dir) : cache_dir_(std::move(cache_dir)) {
  std::error_code ec;
  std::filesystem::create_directories(cache_dir_, ec);
}

BlockTables::~BlockTables() {
  try {
    flush();
  } catch (...) {
  }
}

std::string BlockTables::default_cache_dir() {
  if (const char* env = std::getenv("GRPLAN_CACHE_DIR"); env && *env) return env;
  return ".grplan-cache";
}

BlockTables::ShapeTable& BlockTables::table_for(const BlockShape& shape) {
  check_shape(shape);
  if (shape.cells() > 9) throw StructuralError("exhaustive table needs <= 9 cells");
  auto it = tables_.find(shape);
  if (it != tables_.end()) return *it->second;

  auto st = std::make_unique<ShapeTable>();
  st->shape = shape;
  std::string path = cache_dir_ + "/block_" + std::to_string(shape.rows) + "x" +
                     std::to_string(shape.cols) + ".grt";
  std::map<uint32_t, BlockSolution> cached;
  bool ok = read_table_file(path, shape, &cached);
  if (ok) {
    for (const auto& [id, sol] : cached)
      if (!verify_entry(shape, id, sol)) {
        ok = false;
        break;
      }
  }
  if (ok && !cached.empty()) {
    st->table = std::move(cached);
    st->table_complete = int64_t(st->table.size()) == pattern_count(shape);
  } else {
    st->bfs();
    st->build_table();
    write_table_file(path, shape, st->table);
  }
  auto [pos, inserted] = tables_.emplace(shape, std::move(st));
  return *pos->second;
}

const std::map<uint32_t, BlockSolution>& BlockTables::pattern_table(const BlockShape& shape) {
  ShapeTable& st = table_for(shape);
  return st.table;
}

int BlockTables::table_max_steps(const BlockShape& shape) {
  int longest = 0;
  for (const auto& [id, sol] : pattern_table(shape))
    longest = std::max(longest, sol.length());
  return longest;
}

BlockSolution BlockTables::solve_pattern(const BlockShape& shape, const SwapPattern& pattern) {
  check_pattern(shape, pattern);
  if (pattern.is_identity()) return {};
  if (shape.rows == 3 && shape.cols == 4) return solve_3x4(pattern);
  ShapeTable& st = table_for(shape);
  auto it = st.table.find(pattern_id(shape, pattern));
  if (it == st.table.end())
    throw SolverError("pattern unreachable under full occupancy");
  return it->second;
}

// ---------------------------------------------------------------------------
// 3x4: bounded bidirectional search with a persistent per-pattern cache.

namespace {
const BlockShape kShape34{3, 4};
constexpr int kCap34 = 8;
}  // namespace

void BlockTables::load_ondemand_cache() {
  if (ondemand_loaded_) return;
  ondemand_loaded_ = true;
  std::map<uint32_t, BlockSolution> cached;
  std::string path = cache_dir_ + "/block_3x4_ondemand.grt";
  if (read_table_file(path, kShape34, &cached)) {
    for (const auto& [id, sol] : cached)
      if (verify_entry(kShape34, id, sol)) ondemand_[id] = sol;
  }
}

void BlockTables::save_ondemand_cache() {
  std::map<uint32_t, BlockSolution> sorted(ondemand_.begin(), ondemand_.end());
  write_table_file(cache_dir_ + "/block_3x4_ondemand.grt", kShape34, sorted);
  ondemand_dirty_ = 0;
}

void BlockTables::flush() {
  if (ondemand_dirty_ > 0) save_ondemand_cache();
}

BlockSolution BlockTables::fallback_3x4(const SwapPattern& pattern) {
  // Two sequential 2x4 sub-block solutions: rows {0,1} realize their two
  // row permutations, then rows {1,2} realize row 2's (row 1 already done).
  BlockShape half{2, 4};
  SwapPattern top{{pattern.per_row[0], pattern.per_row[1]}};
  std::vector<int> ident{0, 1, 2, 3};
  SwapPattern bottom{{ident, pattern.per_row[2]}};
  BlockSolution sol;
  for (int stage = 0; stage < 2; ++stage) {
    BlockSolution part = solve_pattern(half, stage == 0 ? top : bottom);
    int row_off = stage == 0 ? 0 : 1;
    for (const ParallelMove& m : part.steps) {
      ParallelMove shifted;
      for (const CycleMove& cy : m.cycles) {
        CycleMove s;
        for (uint8_t v : cy.cells) s.cells.push_back(uint8_t(v + 4 * row_off));
        shifted.cycles.push_back(std::move(s));
      }
      sol.steps.push_back(std::move(shifted));
    }
  }
  return sol;
}

BlockSolution BlockTables::solve_3x4(const SwapPattern& pattern) {
  load_ondemand_cache();
  uint32_t id = pattern_id(kShape34, pattern);
  if (auto it = ondemand_.find(id); it != ondemand_.end()) return it->second;

  BlockSolution sol;
  bool solved = false;
  if (!force_fallback_) {
    const int k = 12;
    static const std::vector<ParallelMove> moves = legal_parallel_moves(kShape34);
    static const std::vector<std::vector<uint8_t>> perms = [] {
      std::vector<std::vector<uint8_t>> v;
      for (const ParallelMove& m : moves) v.push_back(move_perm(m, 12));
      return v;
    }();
    static const std::vector<std::vector<uint8_t>> inv_perms = [] {
      std::vector<std::vector<uint8_t>> v;
      for (const ParallelMove& m : moves) v.push_back(move_perm(invert_move(m), 12));
      return v;
    }();

    uint64_t start = packed_identity(k);
    uint64_t target = pattern_target(kShape34, pattern);
    // state -> move that reached it from its parent (0xFFFF at the seeds)
    std::unordered_map<uint64_t, uint16_t> fwd{{start, 0xFFFF}}, bwd{{target, 0xFFFF}};
    std::vector<uint64_t> fwd_frontier{start}, bwd_frontier{target};
    int fwd_depth = 0, bwd_depth = 0;
    uint64_t meet = 0;
    bool met = start == target;

    while (!met && fwd_depth + bwd_depth < kCap34) {
      bool expand_fwd = fwd_frontier.size() <= bwd_frontier.size();
      auto& mine = expand_fwd ? fwd : bwd;
      auto& theirs = expand_fwd ? bwd : fwd;
      auto& frontier = expand_fwd ? fwd_frontier : bwd_frontier;
      const auto& step_perms = expand_fwd ? perms : inv_perms;
      if (frontier.empty()) break;
      std::vector<uint64_t> next;
      for (uint64_t s : frontier) {
        for (size_t mi = 0; mi < moves.size() && !met; ++mi) {
          uint64_t ns = apply_perm(s, step_perms[mi], k);
          auto [it, fresh] = mine.emplace(ns, uint16_t(mi));
          if (!fresh) continue;
          next.push_back(ns);
          if (theirs.count(ns)) {
            met = true;
            meet = ns;
          }
        }
        if (met) break;
      }
      if (!met && mine.size() + theirs.size() > search_budget_) break;
      frontier.swap(next);
      (expand_fwd ? fwd_depth : bwd_depth) += 1;
      if (frontier.empty()) break;
    }

    if (met) {
      // Walk the forward side back to identity, then the backward side
      // forward to the target.
      std::vector<uint16_t> fwd_moves;
      uint64_t cur = meet;
      while (true) {
        uint16_t mi = fwd.at(cur);
        if (mi == 0xFFFF) break;
        fwd_moves.push_back(mi);
        cur = apply_perm(cur, inv_perms[mi], k);
      }
      std::reverse(fwd_moves.begin(), fwd_moves.end());
      for (uint16_t mi : fwd_moves) sol.steps.push_back(moves[mi]);
      cur = meet;
      while (true) {
        uint16_t mi = bwd.at(cur);
        if (mi == 0xFFFF) break;
        // bwd reached cur by applying inv(mi) from its parent, so the
        // forward move from cur toward the target is mi itself.
        sol.steps.push_back(moves[mi]);
        cur = apply_perm(cur, perms[mi], k);
      }
      solved = true;
    }
  }

  if (!solved) sol = fallback_3x4(pattern);
  if (!verify_entry(kShape34, id, sol))
    throw SolverError("3x4 solver produced an incorrect solution (internal)");

  ondemand_[id] = sol;
  if (++ondemand_dirty_ >= 32) save_ondemand_cache();
  return sol;
}

}  // namespace grplan
