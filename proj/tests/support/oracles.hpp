#pragma once

#include <vector>

#include "cliquesel/graph.hpp"
#include "cliquesel/metrics.hpp"

// Brute-force oracles. Deliberately written from the definitions, sharing no
// code with the library implementations they check.
namespace oracles {

// All maximal cliques via Bron-Kerbosch with pivoting, each sorted ascending.
std::vector<std::vector<int>> maximal_cliques(const cliquesel::Graph& g);

// Clique number from the maximal-clique enumeration (0 for the empty graph).
int max_clique_size(const cliquesel::Graph& g);

// Triangle count by ordered triple enumeration, O(n^3).
long long triangle_total(const cliquesel::Graph& g);

// Per-edge triangle count |adj(u) cap adj(v)| by direct membership scan.
long long triangles_on_edge(const cliquesel::Graph& g, int u, int v);

// Pearson correlation of endpoint degrees over the 2M ordered pairs; returns
// false (degenerate) when E = 0 or the degree variance vanishes.
bool assortativity(const cliquesel::Graph& g, double* out);

double local_clustering(const cliquesel::Graph& g, int v);
double global_clustering(const cliquesel::Graph& g);

// Degeneracy by repeated minimum-degree removal on a mutable degree table.
int degeneracy(const cliquesel::Graph& g);

// Minimum over every vertex ordering of the maximum back-degree; n <= 10.
int degeneracy_exhaustive(const cliquesel::Graph& g);

struct MetricTriple {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
};

// Accuracy / Macro-F1 / Weighted-F1 straight from the per-class TP/FP/FN
// definitions, with the zero-division-to-zero convention.
MetricTriple metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                     int num_classes);

}  // namespace oracles
