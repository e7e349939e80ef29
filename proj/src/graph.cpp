#include "cliquesel/graph.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace cliquesel {

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n <= 0) throw EmptyGraph("graph has no nodes");
  Graph g;
  g.node_count = n;
  g.adj.assign(n, {});
  for (auto [u, v] : edges) {
    g.check_node(u);
    g.check_node(v);
    if (u == v) continue;  // self-loops dropped
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& nbrs : g.adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    g.edge_count += static_cast<long long>(nbrs.size());
  }
  g.edge_count /= 2;
  return g;
}

bool Graph::has_edge(int u, int v) const {
  const auto& nbrs = adj[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

namespace {

bool parse_int(const std::string& tok, long long& out) {
  if (tok.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

}  // namespace

Graph parse_dimacs_clq(std::istream& in) {
  std::string line;
  long long n = -1, declared_m = -1;
  std::vector<std::pair<int, int>> edges;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;  // blank line
    if (tag == "c") continue;
    if (tag == "p") {
      std::string kind, ntok, mtok;
      if (!(ls >> kind >> ntok >> mtok) || (kind != "edge" && kind != "col"))
        throw MalformedHeader("line " + std::to_string(line_no) + ": expected `p edge <n> <m>`");
      if (!parse_int(ntok, n) || !parse_int(mtok, declared_m) || n < 0 || declared_m < 0)
        throw MalformedHeader("line " + std::to_string(line_no) + ": bad counts in header");
      if (n == 0) throw EmptyGraph("header declares zero nodes");
      continue;
    }
    if (tag == "e") {
      if (n < 0) throw MalformedHeader("edge line before `p edge` header");
      std::string utok, vtok;
      long long u = 0, v = 0;
      if (!(ls >> utok >> vtok) || !parse_int(utok, u) || !parse_int(vtok, v))
        throw MalformedLine("line " + std::to_string(line_no) + ": expected `e <u> <v>`");
      if (u < 1 || u > n || v < 1 || v > n)
        throw NodeOutOfRange("line " + std::to_string(line_no) + ": endpoint outside [1," +
                             std::to_string(n) + "]");
      edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
      continue;
    }
    // unknown tags are ignored, matching the tolerant readers used on
    // published .clq files
  }
  if (n < 0) throw MalformedHeader("missing `p edge <n> <m>` header");
  Graph g = Graph::from_edges(static_cast<int>(n), edges);
  if (declared_m >= 0 && declared_m != g.edge_count)
    std::cerr << "warning: header declares " << declared_m << " edges, file has " << g.edge_count
              << " after normalization\n";
  return g;
}

Graph parse_edge_list(std::istream& in) {
  std::string line;
  std::vector<std::pair<long long, long long>> raw;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string utok;
    if (!(ls >> utok)) continue;
    if (utok[0] == '%' || utok[0] == '#') continue;
    std::string vtok;
    long long u = 0, v = 0;
    if (!(ls >> vtok) || !parse_int(utok, u) || !parse_int(vtok, v))
      throw MalformedLine("line " + std::to_string(line_no) + ": expected two integers");
    raw.emplace_back(u, v);
  }
  if (raw.empty()) throw EmptyGraph("edge list has no edges");
  // remap to dense ids in first-seen order
  std::vector<std::pair<int, int>> edges;
  edges.reserve(raw.size());
  std::unordered_map<long long, int> ids;
  ids.reserve(raw.size() * 2);
  for (auto [u, v] : raw) {
    auto iu = ids.try_emplace(u, static_cast<int>(ids.size()));
    auto iv = ids.try_emplace(v, static_cast<int>(ids.size()));
    edges.emplace_back(iu.first->second, iv.first->second);
  }
  return Graph::from_edges(static_cast<int>(ids.size()), edges);
}

namespace {

Graph parse_file(const std::string& path, Graph (*parser)(std::istream&)) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parser(in);
}

}  // namespace

Graph parse_dimacs_clq_file(const std::string& path) { return parse_file(path, parse_dimacs_clq); }
Graph parse_edge_list_file(const std::string& path) { return parse_file(path, parse_edge_list); }

void write_dimacs_clq(const Graph& g, std::ostream& out) {
  out << "p edge " << g.node_count << " " << g.edge_count << "\n";
  for (int u = 0; u < g.node_count; ++u)
    for (int v : g.adj[u])
      if (u < v) out << "e " << u + 1 << " " << v + 1 << "\n";
}

void write_dimacs_clq_file(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_dimacs_clq(g, out);
}

std::vector<int> degree_sequence(const Graph& g) {
  std::vector<int> deg(g.node_count);
  for (int v = 0; v < g.node_count; ++v) deg[v] = g.degree(v);
  return deg;
}

CoreDecomposition core_decomposition(const Graph& g) {
  const int n = g.node_count;
  CoreDecomposition out;
  out.core_number.assign(n, 0);
  out.peel_order.reserve(n);

  std::vector<int> deg = degree_sequence(g);
  std::vector<bool> removed(n, false);
  // lazy-deletion min-heap keyed by (current degree, id); lowest id wins ties
  using Entry = std::pair<int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  for (int v = 0; v < n; ++v) heap.emplace(deg[v], v);

  int degeneracy = 0;
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (removed[v] || d != deg[v]) continue;  // stale entry
    removed[v] = true;
    degeneracy = std::max(degeneracy, d);
    out.core_number[v] = degeneracy;
    out.peel_order.push_back(v);
    for (int u : g.adj[v]) {
      if (!removed[u]) {
        --deg[u];
        heap.emplace(deg[u], u);
      }
    }
  }
  out.degeneracy = degeneracy;
  return out;
}

std::vector<std::pair<int, int>> edge_list(const Graph& g) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(g.edge_count));
  for (int u = 0; u < g.node_count; ++u)
    for (int v : g.adj[u])
      if (u < v) edges.emplace_back(u, v);
  return edges;
}

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

TriangleCounts count_triangles(const Graph& g) {
  TriangleCounts tc;
  tc.edges = edge_list(g);
  const auto m = static_cast<long long>(tc.edges.size());
  tc.per_edge.assign(tc.edges.size(), 0);
#pragma omp parallel for schedule(dynamic, 256)
  for (long long i = 0; i < m; ++i) {
    auto [u, v] = tc.edges[i];
    tc.per_edge[i] = sorted_intersection_size(g.adj[u], g.adj[v]);
  }
  long long sum = 0;  // serial fold keeps the total independent of thread count
  for (long long c : tc.per_edge) sum += c;
  tc.total = sum / 3;
  return tc;
}

long long TriangleCounts::count(int u, int v) const {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(u, v));
  if (it == edges.end() || *it != std::make_pair(u, v))
    throw Error("(" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge");
  return per_edge[static_cast<std::size_t>(it - edges.begin())];
}

bool is_clique(const Graph& g, const std::vector<int>& s) {
  for (int v : s) g.check_node(v);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (s[i] == s[j]) continue;
      if (!g.has_edge(s[i], s[j])) return false;
    }
  return true;
}

}  // namespace cliquesel
