#include "cms/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

#include "cms/errors.hpp"

namespace cms {

DirectedMultigraph::DirectedMultigraph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ < 1) throw SemanticError("graph needs at least one vertex");
  if (edges_.empty()) throw SemanticError("graph needs at least one edge");
  std::unordered_set<std::string> seen;
  for (const Edge& e : edges_) {
    if (e.id.empty()) throw SemanticError("edge id must be nonempty");
    if (!seen.insert(e.id).second) throw SemanticError("duplicate edge id '" + e.id + "'");
    if (e.source < 1 || e.source > vertex_count_ || e.target < 1 || e.target > vertex_count_)
      throw SemanticError("edge '" + e.id + "' endpoint out of range");
  }
  out_.assign(static_cast<std::size_t>(vertex_count_), {});
  for (int i = 0; i < edge_count(); ++i)
    out_[static_cast<std::size_t>(edges_[static_cast<std::size_t>(i)].source - 1)].push_back(i);
  for (int v = 1; v <= vertex_count_; ++v)
    if (out_[static_cast<std::size_t>(v - 1)].empty())
      throw SemanticError("vertex " + std::to_string(v) + " has no outgoing edge");
  out_by_id_ = out_;
  for (auto& lst : out_by_id_)
    std::sort(lst.begin(), lst.end(), [this](int a, int b) {
      return edges_[static_cast<std::size_t>(a)].id < edges_[static_cast<std::size_t>(b)].id;
    });
}

const std::vector<int>& DirectedMultigraph::out_edges(int vertex) const {
  if (vertex < 1 || vertex > vertex_count_)
    throw InvalidParams("vertex " + std::to_string(vertex) + " out of range");
  return out_[static_cast<std::size_t>(vertex - 1)];
}

const std::vector<int>& DirectedMultigraph::out_edges_by_id(int vertex) const {
  if (vertex < 1 || vertex > vertex_count_)
    throw InvalidParams("vertex " + std::to_string(vertex) + " out of range");
  return out_by_id_[static_cast<std::size_t>(vertex - 1)];
}

std::optional<int> DirectedMultigraph::find_edge(const std::string& id) const {
  for (int i = 0; i < edge_count(); ++i)
    if (edges_[static_cast<std::size_t>(i)].id == id) return i;
  return std::nullopt;
}

namespace {

// Vertices reachable from vertex 1 following edges mapped by dir.
std::vector<bool> reachable(const DirectedMultigraph& g, bool forward) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.vertex_count()));
  for (const Edge& e : g.edges()) {
    int from = forward ? e.source : e.target;
    int to = forward ? e.target : e.source;
    adj[static_cast<std::size_t>(from - 1)].push_back(to - 1);
  }
  std::vector<bool> seen(static_cast<std::size_t>(g.vertex_count()), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[static_cast<std::size_t>(v)])
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        stack.push_back(w);
      }
  }
  return seen;
}

}  // namespace

bool is_irreducible(const DirectedMultigraph& g) {
  auto fwd = reachable(g, true);
  auto bwd = reachable(g, false);
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!fwd[static_cast<std::size_t>(v)] || !bwd[static_cast<std::size_t>(v)]) return false;
  return true;
}

int graph_period(const DirectedMultigraph& g) {
  if (!is_irreducible(g)) throw NotIrreducible("period is defined for strongly connected graphs");
  // BFS levels from vertex 1; every edge (u,v) contributes
  // gcd-term level(u) + 1 - level(v). For a strongly connected graph the gcd
  // of these terms over all edges equals the gcd of all cycle lengths.
  std::vector<int> level(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<int> queue{0};
  level[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    for (int e : g.out_edges(u + 1)) {
      int w = g.target(e) - 1;
      if (level[static_cast<std::size_t>(w)] < 0) {
        level[static_cast<std::size_t>(w)] = level[static_cast<std::size_t>(u)] + 1;
        queue.push_back(w);
      }
    }
  }
  int p = 0;
  for (const Edge& e : g.edges()) {
    int diff = level[static_cast<std::size_t>(e.source - 1)] + 1 -
               level[static_cast<std::size_t>(e.target - 1)];
    p = std::gcd(p, std::abs(diff));
  }
  return p == 0 ? 1 : p;
}

bool is_aperiodic(const DirectedMultigraph& g) { return graph_period(g) == 1; }

namespace {

void extend_words(const DirectedMultigraph& g, std::vector<int>& word, int remaining,
                  std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(word);
    return;
  }
  int at = g.target(word.back());
  for (int e : g.out_edges_by_id(at)) {
    word.push_back(e);
    extend_words(g, word, remaining - 1, out);
    word.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> admissible_words(const DirectedMultigraph& g, int length,
                                               std::optional<int> start_vertex) {
  if (length < 0) throw InvalidParams("word length must be nonnegative");
  if (start_vertex && (*start_vertex < 1 || *start_vertex > g.vertex_count()))
    throw InvalidParams("start vertex out of range");
  std::vector<std::vector<int>> out;
  if (length == 0) {
    out.push_back({});
    return out;
  }
  // First symbols in id order, restricted to the start vertex when given.
  std::vector<int> first;
  for (int e = 0; e < g.edge_count(); ++e)
    if (!start_vertex || g.source(e) == *start_vertex) first.push_back(e);
  std::sort(first.begin(), first.end(),
            [&g](int a, int b) { return g.edge(a).id < g.edge(b).id; });
  std::vector<int> word;
  for (int e : first) {
    word.assign(1, e);
    extend_words(g, word, length - 1, out);
  }
  return out;
}

}  // namespace cms
