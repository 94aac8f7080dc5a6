#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace wallperc {

using Edge = std::pair<int, int>;

// Finite connected simple graph on vertices 0..n-1. Edges are stored
// normalized (u < v) and sorted lexicographically; adjacency lists are sorted.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj;

  int edge_count() const { return static_cast<int>(edges.size()); }
  // Index into the normalized edge list, or -1.
  int edge_index(int u, int v) const;
};

// Validates range, self-loops, duplicates and connectivity.
Graph build_graph(int n, std::vector<Edge> edges);

Graph gen_path(int n);
Graph gen_cycle(int n);
Graph gen_grid(int dim, int side);
// Ball of the given radius in the infinite arity-regular tree: the root has
// `arity` children, every other internal vertex arity-1. BFS numbering.
Graph gen_tree(int arity, int depth);
Graph gen_complete_bipartite(int a, int b);
Graph gen_hypercube(int dim);

// Family descriptor: "path:6", "path(6)", "path6", "grid:2,3", "tree:3,2",
// "complete_bipartite:2,3" (alias "kbipartite"), "hypercube:3", "cycle:5".
Graph gen_graph(const std::string& spec);

struct DistanceMatrix {
  int n = 0;
  std::vector<int> d;  // row-major n*n hop counts

  int at(int u, int v) const { return d[static_cast<std::size_t>(u) * n + v]; }
  int max() const;
};

// All-pairs hop distances via BFS from every source.
DistanceMatrix distance_matrix(const Graph& g);

// Text edge lists: first line "n m", then m lines "u v"; '#' starts a comment.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace wallperc
