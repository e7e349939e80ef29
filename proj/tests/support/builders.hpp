#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cliquesel/graph.hpp"
#include "cliquesel/rng.hpp"

// Small named graphs and seeded random graphs shared across the test binaries.
namespace builders {

cliquesel::Graph complete(int n);
cliquesel::Graph cycle(int n);
cliquesel::Graph path(int n);
cliquesel::Graph star(int leaves);  // node 0 is the center
cliquesel::Graph edgeless(int n);
cliquesel::Graph petersen();
cliquesel::Graph diamond();           // K4 minus one edge
cliquesel::Graph two_k4_bridged();    // disjoint K4s joined by a single edge
cliquesel::Graph er(int n, double p, cliquesel::Rng& rng);

// Relabels node v to perm[v].
cliquesel::Graph permuted(const cliquesel::Graph& g, const std::vector<std::size_t>& perm);

}  // namespace builders
