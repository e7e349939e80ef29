#pragma once

#include <vector>

#include "cliquesel/features.hpp"
#include "cliquesel/graph.hpp"

// Single-threaded reference implementations of the OpenMP kernels. Tests
// assert the parallel kernels reproduce these bit for bit; the bench tool
// times one against the other.
namespace cliquesel::reference {

TriangleCounts count_triangles_serial(const Graph& g);
AssortativityResult assortativity_serial(const Graph& g);
std::vector<double> local_clustering_all_serial(const Graph& g);
GlobalFeatures extract_global_serial(const Graph& g);
std::vector<GlobalFeatures> extract_global_batch_serial(const std::vector<Graph>& graphs);

}  // namespace cliquesel::reference
