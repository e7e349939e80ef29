#include "cliquesel/reference.hpp"

#include <algorithm>

namespace cliquesel::reference {

namespace {

long long sorted_intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
  long long count = 0;
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace

TriangleCounts count_triangles_serial(const Graph& g) {
  TriangleCounts tc;
  tc.edges = edge_list(g);
  tc.per_edge.assign(tc.edges.size(), 0);
  for (std::size_t i = 0; i < tc.edges.size(); ++i) {
    auto [u, v] = tc.edges[i];
    tc.per_edge[i] = sorted_intersection_size(g.adj[u], g.adj[v]);
  }
  long long sum = 0;
  for (long long c : tc.per_edge) sum += c;
  tc.total = sum / 3;
  return tc;
}

AssortativityResult assortativity_serial(const Graph& g) {
  if (g.edge_count == 0) return {0.0, true};
  long long sum_jk = 0, sum_j_plus_k = 0, sum_j2_plus_k2 = 0;
  const long long m = g.edge_count;
  for (int u = 0; u < g.node_count; ++u) {
    const long long du = g.degree(u);
    for (int v : g.adj[u]) {
      if (v <= u) continue;
      const long long dv = g.degree(v);
      sum_jk += du * dv;
      sum_j_plus_k += du + dv;
      sum_j2_plus_k2 += du * du + dv * dv;
    }
  }
  const double mean_half_sum = static_cast<double>(sum_j_plus_k) / (2.0 * m);
  const double num = static_cast<double>(sum_jk) / m - mean_half_sum * mean_half_sum;
  const double den = static_cast<double>(sum_j2_plus_k2) / (2.0 * m) - mean_half_sum * mean_half_sum;
  if (den <= 0.0) return {0.0, true};
  return {num / den, false};
}

std::vector<double> local_clustering_all_serial(const Graph& g) {
  const TriangleCounts tc = count_triangles_serial(g);
  std::vector<long long> twice_ev(g.node_count, 0);
  for (std::size_t i = 0; i < tc.edges.size(); ++i) {
    auto [u, v] = tc.edges[i];
    twice_ev[u] += tc.per_edge[i];
    twice_ev[v] += tc.per_edge[i];
  }
  std::vector<double> c(g.node_count, 0.0);
  for (int v = 0; v < g.node_count; ++v) {
    const long long k = g.degree(v);
    if (k <= 1) continue;
    c[v] = static_cast<double>(twice_ev[v]) / (static_cast<double>(k) * (k - 1));
  }
  return c;
}

GlobalFeatures extract_global_serial(const Graph& g) {
  if (g.node_count == 0) throw EmptyGraph("features of an empty graph");
  GlobalFeatures f;
  f.v = g.node_count;
  f.e = g.edge_count;

  const std::vector<int> deg = degree_sequence(g);
  f.d_max = *std::max_element(deg.begin(), deg.end());
  f.d_avg = 2.0 * static_cast<double>(f.e) / static_cast<double>(f.v);
  f.density = f.v >= 2 ? 2.0 * static_cast<double>(f.e) /
                             (static_cast<double>(f.v) * (static_cast<double>(f.v) - 1.0))
                       : 0.0;

  const AssortativityResult ar = assortativity_serial(g);
  f.assortativity = ar.value;
  f.assortativity_degenerate = ar.degenerate;

  const TriangleCounts tc = count_triangles_serial(g);
  f.triangles = tc.total;
  if (!tc.per_edge.empty()) {
    long long sum = 0, best = 0;
    for (long long c : tc.per_edge) {
      sum += c;
      best = std::max(best, c);
    }
    f.t_avg = static_cast<double>(sum) / static_cast<double>(tc.per_edge.size());
    f.t_max = best;
  }

  std::vector<double> clustering = local_clustering_all_serial(g);
  std::sort(clustering.begin(), clustering.end());
  double csum = 0.0;
  for (double x : clustering) csum += x;
  f.kappa_avg = clustering.empty() ? 0.0 : csum / static_cast<double>(clustering.size());

  long long triplets = 0;
  for (int d : deg) triplets += static_cast<long long>(d) * (d - 1) / 2;
  f.kappa = triplets > 0 ? 3.0 * static_cast<double>(tc.total) / static_cast<double>(triplets) : 0.0;

  f.k_core_max = core_decomposition(g).degeneracy;
  return f;
}

std::vector<GlobalFeatures> extract_global_batch_serial(const std::vector<Graph>& graphs) {
  std::vector<GlobalFeatures> out;
  out.reserve(graphs.size());
  for (const Graph& g : graphs) out.push_back(extract_global_serial(g));
  return out;
}

}  // namespace cliquesel::reference
