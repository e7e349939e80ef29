#include "cliquesel/solvers.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>

#include "cliquesel/errors.hpp"

namespace cliquesel {

const char* solver_name(SolverId id) {
  switch (id) {
    case SolverId::ColorBB: return "ColorBB";
    case SolverId::DegenBB: return "DegenBB";
    case SolverId::DynOrderBB: return "DynOrderBB";
    case SolverId::PartitionBoundBB: return "PartitionBoundBB";
  }
  return "?";
}

std::optional<SolverId> solver_from_name(std::string_view name) {
  for (SolverId id : kAllSolvers)
    if (name == solver_name(id)) return id;
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

// Dense bitset adjacency. Rows are word-aligned so candidate-set operations
// are AND loops over n/64 words.
struct BitGraph {
  int n = 0;
  int words = 0;
  std::vector<uint64_t> rows;

  explicit BitGraph(const Graph& g) : n(g.node_count), words((g.node_count + 63) / 64) {
    rows.assign(static_cast<size_t>(n) * words, 0);
    for (int u = 0; u < n; ++u)
      for (int v : g.adj[u]) row(u)[v >> 6] |= uint64_t(1) << (v & 63);
  }

  uint64_t* row(int u) { return rows.data() + static_cast<size_t>(u) * words; }
  const uint64_t* row(int u) const { return rows.data() + static_cast<size_t>(u) * words; }

  bool test(int u, int v) const { return (row(u)[v >> 6] >> (v & 63)) & 1; }
};

struct BitSetBuf {
  std::vector<uint64_t> w;
  void reset(int words) { w.assign(words, 0); }
  void set(int v) { w[v >> 6] |= uint64_t(1) << (v & 63); }
  void clear(int v) { w[v >> 6] &= ~(uint64_t(1) << (v & 63)); }
  bool intersects(const uint64_t* other, int words) const {
    for (int i = 0; i < words; ++i)
      if (w[i] & other[i]) return true;
    return false;
  }
};

// Search budget. Checked once per node expansion; a timed-out search keeps
// its incumbent.
struct SearchClock {
  Clock::time_point deadline;
  long long node_limit;
  long long nodes = 0;
  bool out = false;

  SearchClock(Clock::time_point start, const Budget& b)
      : deadline(start + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double>(b.time_limit_s))),
        node_limit(b.node_limit ? *b.node_limit : -1) {}

  // Returns true when the budget is exhausted, before counting the node.
  bool charge() {
    if (out) return true;
    if (node_limit >= 0 && nodes >= node_limit) { out = true; return true; }
    if (Clock::now() >= deadline) { out = true; return true; }
    ++nodes;
    return false;
  }
};

// Greedy sequential coloring of an id-sorted candidate set. Vertices come
// back grouped by color class (classes in order of creation, ids ascending
// within a class) with 1-based color numbers, so colors[] is nondecreasing.
struct Coloring {
  std::vector<int> ordered;
  std::vector<int> colors;
  std::vector<std::vector<int>> classes;
  int num_colors = 0;
};

void greedy_color(const BitGraph& bg, const std::vector<int>& cand, Coloring& col, bool keep_classes) {
  col.ordered.clear();
  col.colors.clear();
  col.classes.clear();
  col.num_colors = 0;
  static thread_local std::vector<int> remaining, next_remaining;
  static thread_local BitSetBuf class_mask;
  remaining = cand;
  while (!remaining.empty()) {
    ++col.num_colors;
    class_mask.reset(bg.words);
    next_remaining.clear();
    if (keep_classes) col.classes.emplace_back();
    for (int v : remaining) {
      if (class_mask.intersects(bg.row(v), bg.words)) {
        next_remaining.push_back(v);
      } else {
        class_mask.set(v);
        col.ordered.push_back(v);
        col.colors.push_back(col.num_colors);
        if (keep_classes) col.classes.back().push_back(v);
      }
    }
    remaining.swap(next_remaining);
  }
}

// Collect (allowed & N(v)) in ascending id order.
void intersect_into(const BitGraph& bg, const BitSetBuf& allowed, int v, std::vector<int>& out) {
  out.clear();
  const uint64_t* r = bg.row(v);
  for (int i = 0; i < bg.words; ++i) {
    uint64_t m = allowed.w[i] & r[i];
    while (m) {
      int bit = std::countr_zero(m);
      out.push_back(i * 64 + bit);
      m &= m - 1;
    }
  }
}

std::vector<int> all_vertices(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

SolveOutcome finish(SolverId id, std::vector<int> clique, bool timed_out, Clock::time_point start) {
  std::sort(clique.begin(), clique.end());
  SolveOutcome out;
  out.solver = id;
  out.size = static_cast<int>(clique.size());
  out.clique = std::move(clique);
  out.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  out.status = timed_out ? SolveStatus::TimedOut : SolveStatus::Exact;
  return out;
}

void require_solvable(const Graph& g, const Budget& b) {
  if (g.node_count == 0) throw EmptyGraph("solve: graph has no nodes");
  if (!(b.time_limit_s > 0.0)) throw InvalidSpec("solve: time limit must be positive");
  if (b.node_limit && *b.node_limit < 0) throw InvalidSpec("solve: node limit must be non-negative");
}

// --- ColorBB -----------------------------------------------------------
//
// Tomita-style branch and bound. Each node recolors its candidate set and
// scans vertices in reverse coloring order, so the per-vertex bound
// |clique| + color(v) is nonincreasing and the first failure prunes the rest.

struct ColorBBSearch {
  const BitGraph& bg;
  SearchClock clock;
  std::vector<int> best;
  std::vector<int> clique;
  // Indexed by recursion depth so buffers are reused, never reallocated
  // mid-search (outer frames hold references into them).
  std::vector<Coloring> col_by_depth;
  std::vector<BitSetBuf> mask_by_depth;
  std::vector<std::vector<int>> cand_by_depth;

  ColorBBSearch(const BitGraph& b, SearchClock c)
      : bg(b), clock(c), col_by_depth(b.n + 1), mask_by_depth(b.n + 1), cand_by_depth(b.n + 1) {}

  void expand(int depth, const std::vector<int>& cand) {
    if (clock.charge()) return;
    if (clique.size() > best.size()) best = clique;
    if (cand.empty()) return;
    Coloring& col = col_by_depth[depth];
    greedy_color(bg, cand, col, false);
    BitSetBuf& allowed = mask_by_depth[depth];
    allowed.reset(bg.words);
    for (int v : col.ordered) allowed.set(v);
    for (int i = static_cast<int>(col.ordered.size()) - 1; i >= 0; --i) {
      if (clique.size() + col.colors[i] <= best.size()) return;
      int v = col.ordered[i];
      allowed.clear(v);
      std::vector<int>& child = cand_by_depth[depth];
      intersect_into(bg, allowed, v, child);
      clique.push_back(v);
      expand(depth + 1, child);
      clique.pop_back();
      if (clock.out) return;
    }
  }
};

// --- DegenBB -----------------------------------------------------------
//
// Processes vertices in degeneracy (peel) order; each root candidate set is
// the right-neighborhood, so it has at most d vertices and the search stops
// outright once a clique of size d+1 is found.

struct DegenBBSearch {
  const BitGraph& bg;
  SearchClock clock;
  std::vector<int> best;
  std::vector<int> clique;
  std::vector<std::vector<int>> cand_by_depth;

  DegenBBSearch(const BitGraph& b, SearchClock c) : bg(b), clock(c), cand_by_depth(b.n + 1) {}

  void expand(int depth, const std::vector<int>& cand) {
    if (clock.charge()) return;
    if (clique.size() > best.size()) best = clique;
    for (size_t i = 0; i < cand.size(); ++i) {
      if (clique.size() + (cand.size() - i) <= best.size()) return;
      int v = cand[i];
      std::vector<int>& child = cand_by_depth[depth];
      child.clear();
      for (size_t j = i + 1; j < cand.size(); ++j)
        if (bg.test(v, cand[j])) child.push_back(cand[j]);
      clique.push_back(v);
      expand(depth + 1, child);
      clique.pop_back();
      if (clock.out) return;
    }
  }
};

// --- DynOrderBB --------------------------------------------------------
//
// Binary include/exclude branching. The branching vertex is re-picked at
// every step from a fresh coloring: smallest color class first, then higher
// candidate degree, then lower id.

struct DynOrderBBSearch {
  const BitGraph& bg;
  SearchClock clock;
  std::vector<int> best;
  std::vector<int> clique;
  std::vector<Coloring> col_by_depth;
  std::vector<BitSetBuf> mask_by_depth;
  std::vector<std::vector<int>> cand_by_depth;

  DynOrderBBSearch(const BitGraph& b, SearchClock c)
      : bg(b), clock(c), col_by_depth(b.n + 1), mask_by_depth(b.n + 1), cand_by_depth(b.n + 1) {}

  int cand_degree(const BitSetBuf& cand_mask, int v) {
    const uint64_t* r = bg.row(v);
    int deg = 0;
    for (int i = 0; i < bg.words; ++i) deg += std::popcount(cand_mask.w[i] & r[i]);
    return deg;
  }

  void expand(int depth, std::vector<int>& cand) {
    if (clock.charge()) return;
    if (clique.size() > best.size()) best = clique;
    while (!cand.empty()) {
      Coloring& col = col_by_depth[depth];
      greedy_color(bg, cand, col, true);
      if (clique.size() + col.num_colors <= best.size()) return;
      BitSetBuf& cand_mask = mask_by_depth[depth];
      cand_mask.reset(bg.words);
      for (int v : cand) cand_mask.set(v);
      int pick = -1, pick_class = 0, pick_deg = -1;
      for (const std::vector<int>& cls : col.classes) {
        for (int v : cls) {
          int deg = cand_degree(cand_mask, v);
          bool better = pick < 0;
          if (!better && static_cast<int>(cls.size()) != pick_class)
            better = static_cast<int>(cls.size()) < pick_class;
          else if (!better && deg != pick_deg)
            better = deg > pick_deg;
          else if (!better)
            better = v < pick;
          if (better) {
            pick = v;
            pick_class = static_cast<int>(cls.size());
            pick_deg = deg;
          }
        }
      }
      std::vector<int>& child = cand_by_depth[depth];
      child.clear();
      for (int u : cand)
        if (u != pick && bg.test(pick, u)) child.push_back(u);
      clique.push_back(pick);
      expand(depth + 1, child);
      clique.pop_back();
      if (clock.out) return;
      cand.erase(std::find(cand.begin(), cand.end(), pick));
    }
  }
};

// --- PartitionBoundBB --------------------------------------------------
//
// ColorBB's partition bound, tightened by conflict detection: unit color
// classes propagate their vertex into the other classes; each emptied class
// proves the propagating group jointly infeasible, lowering the bound by one.
// Consumed groups are disjoint, so each conflict is worth a full unit.

int partition_conflicts(const BitGraph& bg, const std::vector<std::vector<int>>& classes) {
  int k = static_cast<int>(classes.size());
  if (k < 2) return 0;
  std::vector<char> consumed(k, 0);
  int conflicts = 0;
  std::vector<std::vector<int>> work;
  std::vector<int> widx;
  for (;;) {
    work.clear();
    widx.clear();
    for (int j = 0; j < k; ++j)
      if (!consumed[j]) {
        work.push_back(classes[j]);
        widx.push_back(j);
      }
    if (static_cast<int>(work.size()) < 2) return conflicts;
    std::vector<char> used(work.size(), 0);
    int emptied = -1;
    for (;;) {
      int unit = -1;
      for (size_t i = 0; i < work.size(); ++i)
        if (!used[i] && work[i].size() == 1) { unit = static_cast<int>(i); break; }
      if (unit < 0) break;
      used[unit] = 1;
      int v = work[unit][0];
      for (size_t i = 0; i < work.size() && emptied < 0; ++i) {
        if (static_cast<int>(i) == unit || used[i]) continue;
        std::vector<int>& cls = work[i];
        cls.erase(std::remove_if(cls.begin(), cls.end(), [&](int u) { return !bg.test(v, u); }),
                  cls.end());
        if (cls.empty()) emptied = static_cast<int>(i);
      }
      if (emptied >= 0) break;
    }
    if (emptied < 0) return conflicts;
    ++conflicts;
    for (size_t i = 0; i < work.size(); ++i)
      if (used[i]) consumed[widx[i]] = 1;
    consumed[widx[emptied]] = 1;
  }
}

struct PartitionBoundBBSearch {
  const BitGraph& bg;
  SearchClock clock;
  std::vector<int> best;
  std::vector<int> clique;
  std::vector<Coloring> col_by_depth;
  std::vector<BitSetBuf> mask_by_depth;
  std::vector<std::vector<int>> cand_by_depth;

  PartitionBoundBBSearch(const BitGraph& b, SearchClock c)
      : bg(b), clock(c), col_by_depth(b.n + 1), mask_by_depth(b.n + 1), cand_by_depth(b.n + 1) {}

  void expand(int depth, const std::vector<int>& cand) {
    if (clock.charge()) return;
    if (clique.size() > best.size()) best = clique;
    if (cand.empty()) return;
    Coloring& col = col_by_depth[depth];
    greedy_color(bg, cand, col, true);
    int ub = col.num_colors - partition_conflicts(bg, col.classes);
    if (clique.size() + ub <= best.size()) return;
    BitSetBuf& allowed = mask_by_depth[depth];
    allowed.reset(bg.words);
    for (int v : col.ordered) allowed.set(v);
    for (int i = static_cast<int>(col.ordered.size()) - 1; i >= 0; --i) {
      if (clique.size() + col.colors[i] <= best.size()) return;
      int v = col.ordered[i];
      allowed.clear(v);
      std::vector<int>& child = cand_by_depth[depth];
      intersect_into(bg, allowed, v, child);
      clique.push_back(v);
      expand(depth + 1, child);
      clique.pop_back();
      if (clock.out) return;
    }
  }
};

}  // namespace

SolveOutcome solve_color_bb(const Graph& g, const Budget& b) {
  require_solvable(g, b);
  Clock::time_point start = Clock::now();
  BitGraph bg(g);
  ColorBBSearch search(bg, SearchClock(start, b));
  search.expand(0, all_vertices(g.node_count));
  return finish(SolverId::ColorBB, std::move(search.best), search.clock.out, start);
}

SolveOutcome solve_degen_bb(const Graph& g, const Budget& b) {
  require_solvable(g, b);
  Clock::time_point start = Clock::now();
  BitGraph bg(g);
  CoreDecomposition core = core_decomposition(g);
  std::vector<int> pos(g.node_count);
  for (int i = 0; i < g.node_count; ++i) pos[core.peel_order[i]] = i;
  DegenBBSearch search(bg, SearchClock(start, b));
  std::vector<int> root;
  for (int i = 0; i < g.node_count; ++i) {
    if (static_cast<int>(search.best.size()) >= core.degeneracy + 1) break;
    if (search.clock.out) break;
    int v = core.peel_order[i];
    root.clear();
    for (int u : g.adj[v])
      if (pos[u] > i) root.push_back(u);
    std::sort(root.begin(), root.end());
    if (1 + root.size() <= search.best.size()) continue;
    search.clique.assign(1, v);
    search.expand(0, root);
    search.clique.clear();
  }
  return finish(SolverId::DegenBB, std::move(search.best), search.clock.out, start);
}

SolveOutcome solve_dynorder_bb(const Graph& g, const Budget& b) {
  require_solvable(g, b);
  Clock::time_point start = Clock::now();
  BitGraph bg(g);
  DynOrderBBSearch search(bg, SearchClock(start, b));
  std::vector<int> root = all_vertices(g.node_count);
  search.expand(0, root);
  return finish(SolverId::DynOrderBB, std::move(search.best), search.clock.out, start);
}

SolveOutcome solve_partition_bound_bb(const Graph& g, const Budget& b) {
  require_solvable(g, b);
  Clock::time_point start = Clock::now();
  BitGraph bg(g);
  PartitionBoundBBSearch search(bg, SearchClock(start, b));
  search.expand(0, all_vertices(g.node_count));
  return finish(SolverId::PartitionBoundBB, std::move(search.best), search.clock.out, start);
}

SolveOutcome solve_with(SolverId id, const Graph& g, const Budget& b) {
  switch (id) {
    case SolverId::ColorBB: return solve_color_bb(g, b);
    case SolverId::DegenBB: return solve_degen_bb(g, b);
    case SolverId::DynOrderBB: return solve_dynorder_bb(g, b);
    case SolverId::PartitionBoundBB: return solve_partition_bound_bb(g, b);
  }
  throw InvalidSpec("solve: unknown solver id");
}

std::vector<SolveOutcome> run_portfolio(const Graph& g, const Budget& b, bool concurrent) {
  require_solvable(g, b);
  std::vector<SolveOutcome> out(kNumSolvers);
  if (concurrent) {
#pragma omp parallel for schedule(static, 1)
    for (int s = 0; s < kNumSolvers; ++s) out[s] = solve_with(kAllSolvers[s], g, b);
  } else {
    for (int s = 0; s < kNumSolvers; ++s) out[s] = solve_with(kAllSolvers[s], g, b);
  }
  return out;
}

long long clique_core_gap(const Graph& g, int omega) {
  if (g.node_count == 0) throw EmptyGraph("clique_core_gap: graph has no nodes");
  if (omega < 1 || omega > g.node_count) throw InvalidSpec("clique_core_gap: omega out of range");
  return static_cast<long long>(core_decomposition(g).degeneracy) + 1 - omega;
}

}  // namespace cliquesel
