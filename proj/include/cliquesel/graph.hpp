#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cliquesel/errors.hpp"

namespace cliquesel {

// Undirected simple graph over dense 0-based ids. Adjacency lists are sorted
// and deduplicated at construction; instances are immutable afterwards and
// safe to share across threads.
struct Graph {
  int node_count = 0;
  long long edge_count = 0;
  std::vector<std::vector<int>> adj;

  // Normalizes the edge list: drops self-loops, collapses duplicates and
  // both orientations. Endpoints must lie in [0, n).
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  bool has_edge(int u, int v) const;

  void check_node(int v) const {
    if (v < 0 || v >= node_count)
      throw NodeOutOfRange("node " + std::to_string(v) + " outside [0," +
                           std::to_string(node_count) + ")");
  }

  bool operator==(const Graph& o) const = default;
};

// DIMACS clique format: `c` comments, one `p edge <n> <m>` header, `e <u> <v>`
// lines with 1-based ids. A header edge count that disagrees with the actual
// lines is advisory only.
Graph parse_dimacs_clq(std::istream& in);
Graph parse_dimacs_clq_file(const std::string& path);

// Whitespace-separated pairs, `%`/`#` comments; ids remapped to 0..n-1 in
// first-seen order.
Graph parse_edge_list(std::istream& in);
Graph parse_edge_list_file(const std::string& path);

void write_dimacs_clq(const Graph& g, std::ostream& out);
void write_dimacs_clq_file(const Graph& g, const std::string& path);

std::vector<int> degree_sequence(const Graph& g);

struct CoreDecomposition {
  std::vector<int> core_number;
  int degeneracy = 0;
  std::vector<int> peel_order;  // removal order; each node has <= degeneracy later neighbors
};

CoreDecomposition core_decomposition(const Graph& g);

struct TriangleCounts {
  long long total = 0;
  // Canonical edge list (u < v, lexicographic) with aligned per-edge counts
  // per_edge[i] = |adj(u) cap adj(v)| for edges[i] = (u, v).
  std::vector<std::pair<int, int>> edges;
  std::vector<long long> per_edge;

  long long count(int u, int v) const;  // throws Error if (u,v) is not an edge
};

// Per-edge common-neighbor counting; the edge loop runs under OpenMP, the
// final total is folded serially so results match the serial reference
// bit for bit.
TriangleCounts count_triangles(const Graph& g);

// Canonical (u < v, lexicographic) edge list.
std::vector<std::pair<int, int>> edge_list(const Graph& g);

bool is_clique(const Graph& g, const std::vector<int>& s);

}  // namespace cliquesel
