#pragma once

#include <array>
#include <string>
#include <vector>

#include "cliquesel/graph.hpp"
#include "cliquesel/mat.hpp"

namespace cliquesel {

// The 12 global structural features, in the fixed column order used by every
// CSV this project writes: V, E, d_max, d_avg, D, r, T, T_avg, T_max,
// kappa_avg, kappa, K.
struct GlobalFeatures {
  long long v = 0;
  long long e = 0;
  int d_max = 0;
  double d_avg = 0.0;
  double density = 0.0;
  double assortativity = 0.0;
  bool assortativity_degenerate = false;  // edgeless or degree-regular graph
  long long triangles = 0;
  double t_avg = 0.0;   // mean per-edge triangle count
  long long t_max = 0;  // max per-edge triangle count
  double kappa_avg = 0.0;
  double kappa = 0.0;
  int k_core_max = 0;

  std::array<double, 12> as_vector() const;
  static const std::array<std::string, 12>& column_names();
};

struct AssortativityResult {
  double value = 0.0;
  bool degenerate = false;
};

// Pearson correlation of endpoint degrees over all edges. Degree sums are
// accumulated in 64-bit integers, so the result is exactly invariant under
// node relabeling. Edgeless and degree-regular graphs report 0 with the
// degenerate flag set.
AssortativityResult assortativity(const Graph& g);

double local_clustering(const Graph& g, int v);
std::vector<double> local_clustering_all(const Graph& g);  // OpenMP over nodes
double avg_local_clustering(const Graph& g);
double global_clustering(const Graph& g);

GlobalFeatures extract_global(const Graph& g);
std::vector<GlobalFeatures> extract_global_batch(const std::vector<Graph>& graphs);

// n x 2 matrix of (degree, core number) per node, unnormalized.
DenseMatrix node_features(const Graph& g);

struct MinMaxNormalizer {
  std::vector<double> x_min, x_max;
  DenseMatrix apply(const DenseMatrix& m) const;  // constant columns map to 0
};

MinMaxNormalizer minmax_fit(const DenseMatrix& m);
std::pair<MinMaxNormalizer, DenseMatrix> minmax_fit_apply(const DenseMatrix& m);

struct ZScoreNormalizer {
  std::vector<double> mu, sigma;  // population sigma; 0 marks a constant column
  DenseMatrix apply(const DenseMatrix& m) const;
  std::vector<double> apply_row(const std::vector<double>& row) const;
  std::vector<double> apply_row(const double* row) const;  // mu.size() values
};

ZScoreNormalizer zscore_fit(const DenseMatrix& m);  // throws TooFewRows for < 2 rows
std::pair<ZScoreNormalizer, DenseMatrix> zscore_fit_apply(const DenseMatrix& m);

}  // namespace cliquesel
