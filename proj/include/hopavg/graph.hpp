#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hopavg/rng.hpp"

namespace hopavg {

enum class FamilyTag { Path, Cycle, Complete, KRegular, StronglyRegular, Geometric };

std::string to_string(FamilyTag tag);

// Undirected connected graph with canonical link indexing: links are kept
// sorted lexicographically as (u,v) pairs with u < v and a link's id is its
// position in that order. Immutable after construction, safe to share across
// concurrent runs.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> links;
  // Per node: (neighbor id, link id), sorted by neighbor id.
  std::vector<std::vector<std::pair<int, int>>> adjacency;
  // Unit-square coordinates; empty unless the graph was placed geometrically
  // or positions were loaded from a file.
  std::vector<std::array<double, 2>> positions;
  std::optional<FamilyTag> family;

  int link_count() const { return static_cast<int>(links.size()); }
  int degree(int i) const { return static_cast<int>(adjacency[i].size()); }
  bool has_link(int u, int v) const;
  // Link id of {u,v}; -1 when absent.
  int link_id(int u, int v) const;
};

struct GraphInvariants {
  int n = 0;
  int l = 0;
  int min_degree = 0;
  int max_degree = 0;
  int diameter = 0;
  std::optional<FamilyTag> family;
};

// Validates (node range, no self loops, no duplicate links, connected),
// canonicalizes link order, and builds adjacency. Every constructor funnels
// through here.
Graph make_graph(int n, std::vector<std::pair<int, int>> edges,
                 std::optional<FamilyTag> family = std::nullopt);

Graph build_path(int n);      // n >= 2, links {i,i+1}
Graph build_cycle(int n);     // n >= 3, path plus {n-1,0}
Graph build_complete(int n);  // n >= 2
// Circulant: node i connects to i+-1 .. i+-floor(k/2) (mod n), plus the
// antipode i+n/2 when k is odd (which requires n even). 2 <= k <= n-1.
Graph build_circulant(int n, int k);
// The (10,3,0,1) strongly regular fixture.
Graph build_petersen();
// Dispatch by family name: path | cycle | complete | kregular | petersen.
Graph build_family(const std::string& family, int n, std::optional<int> k = std::nullopt);

// Places n nodes uniformly in (0,1)^2 and connects the target_links closest
// pairs (the connection radius is the target_links-th smallest pairwise
// distance; ties broken by canonical pair order). The whole placement is
// redrawn if the result is disconnected; gives up after 1000 redraws.
Graph build_random_geometric(int n, int target_links, Rng& rng);

// Max over node pairs of the shortest-path hop count (BFS from every node).
int diameter(const Graph& g);

GraphInvariants graph_invariants(const Graph& g);

// The common degree if the graph is regular.
std::optional<int> regular_degree(const Graph& g);

// Edge-list text format: first line "n l", then one "u v" per link
// (0-based, u < v). Positions file: one "i x y" line per node.
Graph load_edge_list(const std::string& path);
void load_positions(Graph& g, const std::string& path);

}  // namespace hopavg
