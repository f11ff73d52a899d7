#include <vector>

#include "doctest.h"

#include "cms/errors.hpp"
#include "cms/graph.hpp"

namespace {

using namespace cms;

DirectedMultigraph two_part_graph() {
  // Mirrors the bundled planar example: 1 -> {1, 2}, 2 -> {1, 1}.
  return DirectedMultigraph(2, {{"e1", 1, 2}, {"e2", 1, 1}, {"e3", 2, 1}, {"e4", 2, 1}});
}

// Independent word-count oracle: words of length n from vertex v are counted
// by powers of the edge-count matrix.
long long count_words(const std::vector<std::vector<long long>>& a, int length, int start) {
  std::size_t nv = a.size();
  std::vector<long long> row(nv, 0);
  for (std::size_t j = 0; j < nv; ++j) row[j] = static_cast<std::size_t>(start) - 1 == j ? 1 : 0;
  for (int step = 0; step < length; ++step) {
    std::vector<long long> next(nv, 0);
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = 0; j < nv; ++j) next[j] += row[i] * a[i][j];
    row = next;
  }
  long long total = 0;
  for (long long c : row) total += c;
  return total;
}

TEST_CASE("construction rejects malformed graphs") {
  CHECK_THROWS_AS(DirectedMultigraph(2, {{"a", 1, 1}, {"a", 2, 1}}), SemanticError);
  CHECK_THROWS_AS(DirectedMultigraph(2, {{"a", 1, 3}, {"b", 2, 1}}), SemanticError);
  CHECK_THROWS_AS(DirectedMultigraph(2, {{"a", 0, 1}, {"b", 2, 1}}), SemanticError);
  CHECK_THROWS_AS(DirectedMultigraph(2, {{"", 1, 1}, {"b", 2, 1}}), SemanticError);
  // vertex 2 has no way out
  CHECK_THROWS_AS(DirectedMultigraph(2, {{"a", 1, 1}, {"b", 1, 2}}), SemanticError);
}

TEST_CASE("out-edge views keep declaration and id order") {
  DirectedMultigraph g(2, {{"z", 1, 2}, {"a", 1, 1}, {"m", 2, 1}});
  CHECK(g.out_edges(1) == std::vector<int>{0, 1});
  CHECK(g.out_edges_by_id(1) == std::vector<int>{1, 0});
  CHECK(g.find_edge("m") == 2);
  CHECK_FALSE(g.find_edge("q").has_value());
}

TEST_CASE("irreducibility and period") {
  CHECK(is_irreducible(two_part_graph()));
  CHECK(is_aperiodic(two_part_graph()));
  CHECK(graph_period(two_part_graph()) == 1);

  DirectedMultigraph two_cycle(2, {{"a", 1, 2}, {"b", 2, 1}});
  CHECK(is_irreducible(two_cycle));
  CHECK(graph_period(two_cycle) == 2);
  CHECK_FALSE(is_aperiodic(two_cycle));

  DirectedMultigraph three_cycle(3, {{"a", 1, 2}, {"b", 2, 3}, {"c", 3, 1}});
  CHECK(graph_period(three_cycle) == 3);

  // 2 never gets visited from 1
  DirectedMultigraph stuck(2, {{"a", 1, 1}, {"b", 2, 1}});
  CHECK_FALSE(is_irreducible(stuck));
  CHECK_THROWS_AS(graph_period(stuck), NotIrreducible);
  CHECK_THROWS_AS(is_aperiodic(stuck), NotIrreducible);
}

TEST_CASE("admissible word counts match transition-count powers") {
  DirectedMultigraph g = two_part_graph();
  std::vector<std::vector<long long>> a{{1, 1}, {2, 0}};
  for (int len = 0; len <= 6; ++len) {
    long long total = 0;
    for (int v = 1; v <= 2; ++v) {
      auto words = admissible_words(g, len, v);
      CHECK(static_cast<long long>(words.size()) == count_words(a, len, v));
      total += static_cast<long long>(words.size());
    }
    // The vertex-free overload merges the per-vertex lists; the empty word
    // appears once, not once per vertex.
    if (len > 0) CHECK(static_cast<long long>(admissible_words(g, len).size()) == total);
  }
}

TEST_CASE("admissible words follow the graph in id order") {
  DirectedMultigraph g = two_part_graph();
  auto words = admissible_words(g, 2, 1);
  // From vertex 1: e1 then {e3, e4}, e2 then {e1, e2}; sorted by id.
  REQUIRE(words.size() == 4);
  CHECK(words[0] == std::vector<int>{0, 2});
  CHECK(words[1] == std::vector<int>{0, 3});
  CHECK(words[2] == std::vector<int>{1, 0});
  CHECK(words[3] == std::vector<int>{1, 1});
  for (const auto& w : words)
    for (std::size_t k = 1; k < w.size(); ++k)
      CHECK(g.source(w[k]) == g.target(w[k - 1]));

  CHECK(admissible_words(g, 0).size() == 1);
  CHECK(admissible_words(g, 0).front().empty());
  CHECK_THROWS_AS(admissible_words(g, -1), InvalidParams);
  CHECK_THROWS_AS(admissible_words(g, 1, 5), InvalidParams);
}

}  // namespace
