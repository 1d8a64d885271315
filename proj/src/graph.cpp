#include "hopavg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace hopavg {

std::string to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::Path: return "path";
    case FamilyTag::Cycle: return "cycle";
    case FamilyTag::Complete: return "complete";
    case FamilyTag::KRegular: return "k-regular";
    case FamilyTag::StronglyRegular: return "strongly-regular";
    case FamilyTag::Geometric: return "geometric";
  }
  return "?";
}

bool Graph::has_link(int u, int v) const { return link_id(u, v) >= 0; }

int Graph::link_id(int u, int v) const {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(links.begin(), links.end(), std::make_pair(u, v));
  if (it == links.end() || *it != std::make_pair(u, v)) return -1;
  return static_cast<int>(it - links.begin());
}

namespace {

// Union-find connectivity check on an edge list.
bool edges_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  int components = n;
  for (auto [u, v] : edges) {
    int ru = find(u), rv = find(v);
    if (ru != rv) {
      parent[ru] = rv;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

Graph make_graph(int n, std::vector<std::pair<int, int>> edges,
                 std::optional<FamilyTag> family) {
  if (n < 2) throw std::invalid_argument("graph needs n >= 2 nodes, got " + std::to_string(n));
  for (auto& [u, v] : edges) {
    if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= n)
      throw std::invalid_argument("link (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") out of node range [0," + std::to_string(n - 1) + "]");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("duplicate link in edge list");
  if (!edges_connected(n, edges)) throw std::invalid_argument("graph is not connected");

  Graph g;
  g.n = n;
  g.links = std::move(edges);
  g.family = family;
  g.adjacency.assign(n, {});
  for (int e = 0; e < g.link_count(); ++e) {
    auto [u, v] = g.links[e];
    g.adjacency[u].emplace_back(v, e);
    g.adjacency[v].emplace_back(u, e);
  }
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  return g;
}

Graph build_path(int n) {
  if (n < 2) throw std::invalid_argument("path needs n >= 2, got " + std::to_string(n));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return make_graph(n, std::move(edges), FamilyTag::Path);
}

Graph build_cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3, got " + std::to_string(n));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(0, n - 1);
  return make_graph(n, std::move(edges), FamilyTag::Cycle);
}

Graph build_complete(int n) {
  if (n < 2) throw std::invalid_argument("complete graph needs n >= 2, got " + std::to_string(n));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return make_graph(n, std::move(edges), FamilyTag::Complete);
}

Graph build_circulant(int n, int k) {
  if (k < 2 || k > n - 1)
    throw std::invalid_argument("circulant needs 2 <= k <= n-1, got k=" + std::to_string(k) +
                                ", n=" + std::to_string(n));
  if (k % 2 == 1 && n % 2 == 1)
    throw std::invalid_argument("circulant with odd k=" + std::to_string(k) +
                                " needs even n, got n=" + std::to_string(n));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int off = 1; off <= k / 2; ++off) edges.emplace_back(i, (i + off) % n);
    if (k % 2 == 1) edges.emplace_back(i, (i + n / 2) % n);
  }
  for (auto& [u, v] : edges)
    if (u > v) std::swap(u, v);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return make_graph(n, std::move(edges), FamilyTag::KRegular);
}

Graph build_petersen() {
  // Outer 5-cycle, inner pentagram, spokes.
  std::vector<std::pair<int, int>> edges = {
      {0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4},   // outer
      {5, 7}, {7, 9}, {5, 8}, {6, 8}, {6, 9},   // inner
      {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9},   // spokes
  };
  return make_graph(10, std::move(edges), FamilyTag::StronglyRegular);
}

Graph build_family(const std::string& family, int n, std::optional<int> k) {
  if (family == "path") return build_path(n);
  if (family == "cycle") return build_cycle(n);
  if (family == "complete") return build_complete(n);
  if (family == "kregular" || family == "k-regular") {
    if (!k) throw std::invalid_argument("kregular family needs a degree parameter k");
    return build_circulant(n, *k);
  }
  if (family == "petersen") {
    if (n != 0 && n != 10)
      throw std::invalid_argument("petersen has n = 10, got n=" + std::to_string(n));
    return build_petersen();
  }
  throw std::invalid_argument("unknown graph family '" + family + "'");
}

Graph build_random_geometric(int n, int target_links, Rng& rng) {
  if (n < 2) throw std::invalid_argument("geometric graph needs n >= 2, got " + std::to_string(n));
  const long max_links = static_cast<long>(n) * (n - 1) / 2;
  if (target_links < n - 1 || target_links > max_links)
    throw std::invalid_argument("target_links=" + std::to_string(target_links) +
                                " outside [n-1, n(n-1)/2] = [" + std::to_string(n - 1) + "," +
                                std::to_string(max_links) + "]");

  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<std::array<double, 2>> pos(n);
    for (auto& p : pos) {
      p[0] = rng.uniform01();
      p[1] = rng.uniform01();
    }
    // Radius = target_links-th smallest pairwise distance; realized by taking
    // the target_links closest pairs, ties broken by canonical pair order.
    std::vector<std::tuple<double, int, int>> pairs;
    pairs.reserve(max_links);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        const double dx = pos[u][0] - pos[v][0];
        const double dy = pos[u][1] - pos[v][1];
        pairs.emplace_back(dx * dx + dy * dy, u, v);
      }
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::pair<int, int>> edges;
    edges.reserve(target_links);
    for (int e = 0; e < target_links; ++e)
      edges.emplace_back(std::get<1>(pairs[e]), std::get<2>(pairs[e]));
    if (!edges_connected(n, edges)) continue;
    Graph g = make_graph(n, std::move(edges), FamilyTag::Geometric);
    g.positions = std::move(pos);
    return g;
  }
  throw std::runtime_error("geometric placement stayed disconnected after 1000 redraws (n=" +
                           std::to_string(n) + ", target_links=" + std::to_string(target_links) +
                           "); density looks infeasible");
}

namespace {

// Single-source BFS, returns max hop distance.
int eccentricity(const Graph& g, int src) {
  std::vector<int> dist(g.n, -1);
  std::queue<int> q;
  dist[src] = 0;
  q.push(src);
  int far = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (auto [v, e] : g.adjacency[u]) {
      (void)e;
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        far = std::max(far, dist[v]);
        q.push(v);
      }
    }
  }
  return far;
}

}  // namespace

int diameter(const Graph& g) {
  int d = 0;
  for (int i = 0; i < g.n; ++i) d = std::max(d, eccentricity(g, i));
  return d;
}

GraphInvariants graph_invariants(const Graph& g) {
  GraphInvariants inv;
  inv.n = g.n;
  inv.l = g.link_count();
  inv.min_degree = g.n;
  inv.max_degree = 0;
  for (int i = 0; i < g.n; ++i) {
    inv.min_degree = std::min(inv.min_degree, g.degree(i));
    inv.max_degree = std::max(inv.max_degree, g.degree(i));
  }
  inv.diameter = diameter(g);
  inv.family = g.family;
  return inv;
}

std::optional<int> regular_degree(const Graph& g) {
  int k = g.degree(0);
  for (int i = 1; i < g.n; ++i)
    if (g.degree(i) != k) return std::nullopt;
  return k;
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list '" + path + "'");
  int n = 0, l = 0;
  if (!(in >> n >> l)) throw std::runtime_error("edge list '" + path + "': bad header, want \"n l\"");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(l);
  for (int e = 0; e < l; ++e) {
    int u, v;
    if (!(in >> u >> v))
      throw std::runtime_error("edge list '" + path + "': expected " + std::to_string(l) +
                               " links, got " + std::to_string(e));
    if (u >= v)
      throw std::runtime_error("edge list '" + path + "': link " + std::to_string(e) +
                               " violates u < v");
    edges.emplace_back(u, v);
  }
  return make_graph(n, std::move(edges));
}

void load_positions(Graph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open positions file '" + path + "'");
  std::vector<std::array<double, 2>> pos(g.n);
  std::vector<bool> seen(g.n, false);
  int i;
  double x, y;
  while (in >> i >> x >> y) {
    if (i < 0 || i >= g.n)
      throw std::runtime_error("positions file '" + path + "': node " + std::to_string(i) +
                               " out of range");
    if (seen[i]) throw std::runtime_error("positions file '" + path + "': duplicate node " + std::to_string(i));
    seen[i] = true;
    pos[i] = {x, y};
  }
  for (int j = 0; j < g.n; ++j)
    if (!seen[j])
      throw std::runtime_error("positions file '" + path + "': missing node " + std::to_string(j));
  g.positions = std::move(pos);
}

}  // namespace hopavg
