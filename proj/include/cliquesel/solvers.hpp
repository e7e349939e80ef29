#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cliquesel/graph.hpp"

namespace cliquesel {

// The four reference solvers. Each reimplements one of the strategy families
// behind modern exact maximum-clique codes; none is a port.
enum class SolverId : int {
  ColorBB = 0,          // greedy-coloring bound recomputed per candidate set
  DegenBB = 1,          // degeneracy-order right-neighborhood search, d+1 bound
  DynOrderBB = 2,       // dynamic branching order (color class size, then degree)
  PartitionBoundBB = 3  // partition bound tightened by conflict detection
};

inline constexpr int kNumSolvers = 4;
inline constexpr SolverId kAllSolvers[kNumSolvers] = {
    SolverId::ColorBB, SolverId::DegenBB, SolverId::DynOrderBB, SolverId::PartitionBoundBB};

const char* solver_name(SolverId id);
std::optional<SolverId> solver_from_name(std::string_view name);

enum class SolveStatus { Exact, TimedOut };

inline const char* status_name(SolveStatus s) { return s == SolveStatus::Exact ? "Exact" : "TimedOut"; }

struct Budget {
  double time_limit_s = 0.0;
  std::optional<long long> node_limit;  // search-tree node expansions
};

struct SolveOutcome {
  SolverId solver;
  std::vector<int> clique;  // sorted witness; size() is a lower bound on omega
  int size = 0;
  double wall_time_s = 0.0;
  SolveStatus status = SolveStatus::TimedOut;
};

// Budgets are checked at every search-tree node expansion. A timed-out solve
// returns the incumbent clique found so far.
SolveOutcome solve_color_bb(const Graph& g, const Budget& b);
SolveOutcome solve_degen_bb(const Graph& g, const Budget& b);
SolveOutcome solve_dynorder_bb(const Graph& g, const Budget& b);
SolveOutcome solve_partition_bound_bb(const Graph& g, const Budget& b);

SolveOutcome solve_with(SolverId id, const Graph& g, const Budget& b);

// One outcome per solver, in SolverId order. Each solver runs single-threaded
// with its own budget; `concurrent` runs the four under OpenMP.
std::vector<SolveOutcome> run_portfolio(const Graph& g, const Budget& b, bool concurrent = false);

// (degeneracy + 1) - omega; non-negative whenever omega is exact.
long long clique_core_gap(const Graph& g, int omega);

}  // namespace cliquesel
