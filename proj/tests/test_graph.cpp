#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <sstream>

#include "cliquesel/graph.hpp"
#include "cliquesel/rng.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace cliquesel;

TEST_CASE("from_edges normalizes duplicates, orientations and self-loops") {
  Graph g = Graph::from_edges(4, {{0, 1}, {1, 0}, {0, 1}, {2, 2}, {1, 2}});
  CHECK(g.node_count == 4);
  CHECK(g.edge_count == 2);
  CHECK(g.adj[0] == std::vector<int>{1});
  CHECK(g.adj[1] == std::vector<int>{0, 2});
  CHECK(g.adj[3].empty());
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK(!g.has_edge(0, 2));
  CHECK(!g.has_edge(2, 2));
}

TEST_CASE("from_edges rejects empty and out-of-range input") {
  CHECK_THROWS_AS(Graph::from_edges(0, {}), EmptyGraph);
  CHECK_THROWS_AS(Graph::from_edges(3, {{0, 3}}), NodeOutOfRange);
  CHECK_THROWS_AS(Graph::from_edges(3, {{-1, 0}}), NodeOutOfRange);
  CHECK_THROWS_AS(builders::complete(4).check_node(4), NodeOutOfRange);
}

TEST_CASE("degree sum equals twice the edge count") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    Graph g = builders::er(2 + (int)rng.below(50), rng.uniform(0.05, 0.9), rng);
    std::vector<int> deg = degree_sequence(g);
    CHECK(std::accumulate(deg.begin(), deg.end(), 0LL) == 2 * g.edge_count);
  }
}

TEST_CASE("dimacs parser reads 1-based edges past comments") {
  std::istringstream in(
      "c toy instance\n"
      "p edge 4 3\n"
      "e 1 2\n"
      "e 2 3\n"
      "\n"
      "e 3 4\n");
  Graph g = parse_dimacs_clq(in);
  CHECK(g.node_count == 4);
  CHECK(g.edge_count == 3);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(2, 3));
}

TEST_CASE("dimacs parser rejects malformed input") {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return parse_dimacs_clq(in);
  };
  CHECK_THROWS_AS(parse("p edge x y\ne 1 2\n"), MalformedHeader);
  CHECK_THROWS_AS(parse("e 1 2\n"), MalformedHeader);
  CHECK_THROWS_AS(parse("c only comments\n"), MalformedHeader);
  CHECK_THROWS_AS(parse("p edge 3 1\ne 1\n"), MalformedLine);
  CHECK_THROWS_AS(parse("p edge 3 1\ne 1 4\n"), NodeOutOfRange);
  CHECK_THROWS_AS(parse("p edge 3 1\ne 0 2\n"), NodeOutOfRange);
  CHECK_THROWS_AS(parse("p edge 0 0\n"), EmptyGraph);
}

TEST_CASE("dimacs write/parse round trip is exact") {
  Rng rng(22);
  for (int i = 0; i < 20; ++i) {
    Graph g = builders::er(1 + (int)rng.below(40), rng.uniform01(), rng);
    std::ostringstream out;
    write_dimacs_clq(g, out);
    std::istringstream in(out.str());
    CHECK(parse_dimacs_clq(in) == g);
  }
}

TEST_CASE("edge list parser remaps ids in first-seen order") {
  std::istringstream in(
      "% comment\n"
      "# another\n"
      "7 9\n"
      "9 4\n");
  Graph g = parse_edge_list(in);
  CHECK(g.node_count == 3);  // 7 -> 0, 9 -> 1, 4 -> 2
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 2));
  CHECK(!g.has_edge(0, 2));

  std::istringstream bad("1 x\n");
  CHECK_THROWS_AS(parse_edge_list(bad), MalformedLine);
  std::istringstream lone("1\n");
  CHECK_THROWS_AS(parse_edge_list(lone), MalformedLine);
  std::istringstream empty("% nothing\n");
  CHECK_THROWS_AS(parse_edge_list(empty), EmptyGraph);
}

TEST_CASE("core decomposition matches hand-computed cases") {
  CHECK(core_decomposition(builders::complete(4)).degeneracy == 3);
  CHECK(core_decomposition(builders::cycle(5)).degeneracy == 2);
  CHECK(core_decomposition(builders::path(6)).degeneracy == 1);
  CHECK(core_decomposition(builders::star(5)).degeneracy == 1);
  CHECK(core_decomposition(builders::edgeless(3)).degeneracy == 0);
  CHECK(core_decomposition(builders::petersen()).degeneracy == 3);

  CoreDecomposition k4 = core_decomposition(builders::complete(4));
  CHECK(k4.core_number == std::vector<int>{3, 3, 3, 3});
  CoreDecomposition s3 = core_decomposition(builders::star(3));
  CHECK(s3.core_number == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("degeneracy equals max core number and bounds the peel order") {
  Rng rng(33);
  for (int i = 0; i < 25; ++i) {
    Graph g = builders::er(2 + (int)rng.below(40), rng.uniform(0.05, 0.9), rng);
    CoreDecomposition cd = core_decomposition(g);
    int max_core = 0;
    for (int c : cd.core_number) max_core = std::max(max_core, c);
    CHECK(cd.degeneracy == max_core);
    CHECK(cd.degeneracy == oracles::degeneracy(g));

    // Every node sees at most `degeneracy` neighbors later in the peel order.
    std::vector<int> pos(g.node_count);
    for (int idx = 0; idx < g.node_count; ++idx) pos[cd.peel_order[idx]] = idx;
    for (int v = 0; v < g.node_count; ++v) {
      int later = 0;
      for (int u : g.adj[v])
        if (pos[u] > pos[v]) ++later;
      CHECK(later <= cd.degeneracy);
    }
  }
}

TEST_CASE("degeneracy is the minimum over all orderings of the max back-degree") {
  Rng rng(44);
  for (int i = 0; i < 12; ++i) {
    Graph g = builders::er(3 + (int)rng.below(5), rng.uniform(0.2, 0.9), rng);
    CHECK(core_decomposition(g).degeneracy == oracles::degeneracy_exhaustive(g));
  }
  Graph g8 = builders::er(8, 0.5, rng);
  CHECK(core_decomposition(g8).degeneracy == oracles::degeneracy_exhaustive(g8));
}

TEST_CASE("triangle counts match brute force") {
  TriangleCounts k4 = count_triangles(builders::complete(4));
  CHECK(k4.total == 4);
  CHECK(k4.edges.size() == 6);
  for (long long pe : k4.per_edge) CHECK(pe == 2);
  CHECK(k4.count(0, 1) == 2);
  CHECK(k4.count(1, 0) == 2);
  CHECK_THROWS_AS((void)count_triangles(builders::path(3)).count(0, 2), Error);

  Rng rng(55);
  for (int i = 0; i < 15; ++i) {
    Graph g = builders::er(2 + (int)rng.below(59), rng.uniform(0.05, 0.8), rng);
    TriangleCounts tc = count_triangles(g);
    CHECK(tc.total == oracles::triangle_total(g));
    long long sum = 0;
    for (size_t j = 0; j < tc.edges.size(); ++j) {
      CHECK(tc.per_edge[j] == oracles::triangles_on_edge(g, tc.edges[j].first, tc.edges[j].second));
      sum += tc.per_edge[j];
    }
    CHECK(sum == 3 * tc.total);  // each triangle is seen from its 3 edges
  }
}

TEST_CASE("edge_list is canonical and aligned with count_triangles") {
  Graph g = builders::two_k4_bridged();
  std::vector<std::pair<int, int>> el = edge_list(g);
  CHECK(el.size() == (size_t)g.edge_count);
  for (size_t i = 0; i < el.size(); ++i) {
    CHECK(el[i].first < el[i].second);
    if (i) CHECK(el[i - 1] < el[i]);
  }
  CHECK(count_triangles(g).edges == el);
}

TEST_CASE("is_clique accepts exactly the complete subsets") {
  Graph g = builders::two_k4_bridged();
  CHECK(is_clique(g, {0, 1, 2, 3}));
  CHECK(is_clique(g, {3, 4}));
  CHECK(is_clique(g, {2}));
  CHECK(is_clique(g, {}));
  CHECK(!is_clique(g, {2, 3, 4}));
  CHECK(!is_clique(g, {0, 5}));
  CHECK(is_clique(g, {1, 1}));  // duplicates collapse: set semantics
  CHECK_THROWS_AS((void)is_clique(g, {0, 8}), NodeOutOfRange);
}
