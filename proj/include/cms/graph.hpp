#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cms {

// Directed multigraph edge. Vertices are 1-based; parallel edges and
// self-loops are allowed. The id is the edge's symbol in words and output.
struct Edge {
  std::string id;
  int source = 0;
  int target = 0;
};

// Immutable finite directed multigraph. Construction validates that ids are
// unique, endpoints are in range, and every vertex has at least one outgoing
// edge (so the chain never gets stuck).
class DirectedMultigraph {
 public:
  DirectedMultigraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int index) const { return edges_[static_cast<std::size_t>(index)]; }
  const std::vector<Edge>& edges() const { return edges_; }

  int source(int index) const { return edges_[static_cast<std::size_t>(index)].source; }
  int target(int index) const { return edges_[static_cast<std::size_t>(index)].target; }

  // Outgoing edge indices of a vertex, in declaration order.
  const std::vector<int>& out_edges(int vertex) const;

  // Outgoing edge indices sorted by edge id (lexicographic word order).
  const std::vector<int>& out_edges_by_id(int vertex) const;

  // Edge index by id, if present.
  std::optional<int> find_edge(const std::string& id) const;

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;        // per vertex, declaration order
  std::vector<std::vector<int>> out_by_id_;  // per vertex, id order
};

// True iff the graph is strongly connected.
bool is_irreducible(const DirectedMultigraph& g);

// True iff the gcd of all cycle lengths is 1. Throws NotIrreducible when the
// graph is not strongly connected.
bool is_aperiodic(const DirectedMultigraph& g);

// Gcd of cycle lengths of a strongly connected graph.
int graph_period(const DirectedMultigraph& g);

// All edge-index words of the given length that follow the graph, optionally
// restricted to words starting at start_vertex. Words are ordered
// lexicographically by edge id. Length 0 yields the single empty word.
std::vector<std::vector<int>> admissible_words(const DirectedMultigraph& g, int length,
                                               std::optional<int> start_vertex = std::nullopt);

}  // namespace cms
