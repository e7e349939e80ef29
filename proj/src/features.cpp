#include "cliquesel/features.hpp"

#include <algorithm>
#include <cmath>

namespace cliquesel {

std::array<double, 12> GlobalFeatures::as_vector() const {
  return {static_cast<double>(v),
          static_cast<double>(e),
          static_cast<double>(d_max),
          d_avg,
          density,
          assortativity,
          static_cast<double>(triangles),
          t_avg,
          static_cast<double>(t_max),
          kappa_avg,
          kappa,
          static_cast<double>(k_core_max)};
}

const std::array<std::string, 12>& GlobalFeatures::column_names() {
  static const std::array<std::string, 12> names = {"V",     "E",     "d_max",     "d_avg",
                                                    "D",     "r",     "T",         "T_avg",
                                                    "T_max", "kappa_avg", "kappa", "K"};
  return names;
}

AssortativityResult assortativity(const Graph& g) {
  if (g.edge_count == 0) return {0.0, true};
  // integer accumulators: the value depends only on the multiset of endpoint
  // degree pairs, never on edge order
  long long sum_jk = 0, sum_j_plus_k = 0, sum_j2_plus_k2 = 0;
  const long long m = g.edge_count;
#pragma omp parallel for reduction(+ : sum_jk, sum_j_plus_k, sum_j2_plus_k2) schedule(static)
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
  if (den <= 0.0) return {0.0, true};  // degree-regular
  return {num / den, false};
}

namespace {

// edges among the neighbors of v, via the per-edge triangle counts incident
// to v (each triangle at v is seen by exactly two of its incident edges)
std::vector<long long> neighbor_edge_counts(const Graph& g, const TriangleCounts& tc) {
  std::vector<long long> twice_ev(g.node_count, 0);
  for (std::size_t i = 0; i < tc.edges.size(); ++i) {
    auto [u, v] = tc.edges[i];
    twice_ev[u] += tc.per_edge[i];
    twice_ev[v] += tc.per_edge[i];
  }
  return twice_ev;
}

std::vector<double> clustering_from_counts(const Graph& g, const std::vector<long long>& twice_ev) {
  std::vector<double> c(g.node_count, 0.0);
#pragma omp parallel for schedule(static)
  for (int v = 0; v < g.node_count; ++v) {
    const long long k = g.degree(v);
    if (k <= 1) continue;
    c[v] = static_cast<double>(twice_ev[v]) / (static_cast<double>(k) * (k - 1));
  }
  return c;
}

// Summing in value order makes the mean independent of node labeling.
double mean_sorted(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double x : values) sum += x;
  return sum / static_cast<double>(values.size());
}

}  // namespace

double local_clustering(const Graph& g, int v) {
  g.check_node(v);
  const long long k = g.degree(v);
  if (k <= 1) return 0.0;
  long long ev = 0;  // edges among the neighbors of v
  const auto& nbrs = g.adj[v];
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    for (std::size_t j = i + 1; j < nbrs.size(); ++j)
      if (g.has_edge(nbrs[i], nbrs[j])) ++ev;
  return 2.0 * static_cast<double>(ev) / (static_cast<double>(k) * (k - 1));
}

std::vector<double> local_clustering_all(const Graph& g) {
  const TriangleCounts tc = count_triangles(g);
  return clustering_from_counts(g, neighbor_edge_counts(g, tc));
}


double avg_local_clustering(const Graph& g) {
  if (g.node_count == 0) throw EmptyGraph("average clustering of an empty graph");
  return mean_sorted(local_clustering_all(g));
}

double global_clustering(const Graph& g) {
  const TriangleCounts tc = count_triangles(g);
  long long triplets = 0;
  for (int v = 0; v < g.node_count; ++v) {
    const long long k = g.degree(v);
    triplets += k * (k - 1) / 2;
  }
  if (triplets == 0) return 0.0;
  return 3.0 * static_cast<double>(tc.total) / static_cast<double>(triplets);
}

GlobalFeatures extract_global(const Graph& g) {
  if (g.node_count == 0) throw EmptyGraph("features of an empty graph");
  GlobalFeatures f;
  f.v = g.node_count;
  f.e = g.edge_count;

  const std::vector<int> deg = degree_sequence(g);
  f.d_max = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  f.d_avg = 2.0 * static_cast<double>(f.e) / static_cast<double>(f.v);
  f.density = f.v >= 2 ? 2.0 * static_cast<double>(f.e) /
                             (static_cast<double>(f.v) * (static_cast<double>(f.v) - 1.0))
                       : 0.0;

  const AssortativityResult ar = assortativity(g);
  f.assortativity = ar.value;
  f.assortativity_degenerate = ar.degenerate;

  const TriangleCounts tc = count_triangles(g);
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

  f.kappa_avg = mean_sorted(clustering_from_counts(g, neighbor_edge_counts(g, tc)));
  long long triplets = 0;
  for (int d : deg) triplets += static_cast<long long>(d) * (d - 1) / 2;
  f.kappa = triplets > 0 ? 3.0 * static_cast<double>(tc.total) / static_cast<double>(triplets) : 0.0;

  f.k_core_max = core_decomposition(g).degeneracy;
  return f;
}

std::vector<GlobalFeatures> extract_global_batch(const std::vector<Graph>& graphs) {
  std::vector<GlobalFeatures> out(graphs.size());
  const auto n = static_cast<long long>(graphs.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) out[i] = extract_global(graphs[i]);
  return out;
}


DenseMatrix node_features(const Graph& g) {
  if (g.node_count == 0) throw EmptyGraph("node features of an empty graph");
  const CoreDecomposition cd = core_decomposition(g);
  DenseMatrix x(g.node_count, 2);
  for (int v = 0; v < g.node_count; ++v) {
    x.at(v, 0) = g.degree(v);
    x.at(v, 1) = cd.core_number[v];
  }
  return x;
}

MinMaxNormalizer minmax_fit(const DenseMatrix& m) {
  if (m.rows < 1) throw TooFewRows("min-max fit needs at least one row");
  MinMaxNormalizer n;
  n.x_min.assign(m.cols, 0.0);
  n.x_max.assign(m.cols, 0.0);
  for (int c = 0; c < m.cols; ++c) {
    double lo = m.at(0, c), hi = m.at(0, c);
    for (int r = 1; r < m.rows; ++r) {
      lo = std::min(lo, m.at(r, c));
      hi = std::max(hi, m.at(r, c));
    }
    n.x_min[c] = lo;
    n.x_max[c] = hi;
  }
  return n;
}

DenseMatrix MinMaxNormalizer::apply(const DenseMatrix& m) const {
  if (m.cols != static_cast<int>(x_min.size()))
    throw ShapeMismatch("min-max apply: column count differs from fit");
  DenseMatrix out(m.rows, m.cols);
  for (int c = 0; c < m.cols; ++c) {
    const double range = x_max[c] - x_min[c];
    for (int r = 0; r < m.rows; ++r)
      out.at(r, c) = range > 0.0 ? (m.at(r, c) - x_min[c]) / range : 0.0;
  }
  return out;
}

std::pair<MinMaxNormalizer, DenseMatrix> minmax_fit_apply(const DenseMatrix& m) {
  MinMaxNormalizer n = minmax_fit(m);
  return {n, n.apply(m)};
}

ZScoreNormalizer zscore_fit(const DenseMatrix& m) {
  if (m.rows < 2) throw TooFewRows("z-score fit needs at least two rows");
  ZScoreNormalizer n;
  n.mu.assign(m.cols, 0.0);
  n.sigma.assign(m.cols, 0.0);
  for (int c = 0; c < m.cols; ++c) {
    double sum = 0.0;
    for (int r = 0; r < m.rows; ++r) sum += m.at(r, c);
    const double mu = sum / m.rows;
    double ss = 0.0;
    for (int r = 0; r < m.rows; ++r) {
      const double d = m.at(r, c) - mu;
      ss += d * d;
    }
    n.mu[c] = mu;
    n.sigma[c] = std::sqrt(ss / m.rows);  // population sigma
  }
  return n;
}

DenseMatrix ZScoreNormalizer::apply(const DenseMatrix& m) const {
  if (m.cols != static_cast<int>(mu.size()))
    throw ShapeMismatch("z-score apply: column count differs from fit");
  DenseMatrix out(m.rows, m.cols);
  for (int c = 0; c < m.cols; ++c)
    for (int r = 0; r < m.rows; ++r)
      out.at(r, c) = sigma[c] > 0.0 ? (m.at(r, c) - mu[c]) / sigma[c] : 0.0;
  return out;
}

std::vector<double> ZScoreNormalizer::apply_row(const std::vector<double>& row) const {
  if (row.size() != mu.size()) throw ShapeMismatch("z-score apply: row width differs from fit");
  return apply_row(row.data());
}

std::vector<double> ZScoreNormalizer::apply_row(const double* row) const {
  std::vector<double> out(mu.size(), 0.0);
  for (std::size_t c = 0; c < mu.size(); ++c)
    out[c] = sigma[c] > 0.0 ? (row[c] - mu[c]) / sigma[c] : 0.0;
  return out;
}

std::pair<ZScoreNormalizer, DenseMatrix> zscore_fit_apply(const DenseMatrix& m) {
  ZScoreNormalizer n = zscore_fit(m);
  return {n, n.apply(m)};
}

}  // namespace cliquesel
