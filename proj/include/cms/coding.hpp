#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cms/point.hpp"
#include "cms/system.hpp"

namespace cms {

// Finite past of edge symbols; edges.front() is the oldest, edges.back()
// the most recent. Must follow the graph.
struct BackwardWord {
  std::vector<int> edges;
};

// Folds the word's maps over a starting state of the oldest edge's source
// part: w_{e_last} o ... o w_{e_first}(start). Defaults to the source
// part's representative. Throws InadmissibleWord when the word breaks the
// graph or the start lies in the wrong part.
Point code_word(const MarkovSystem& sys, const BackwardWord& w,
                std::optional<Point> start = std::nullopt);

struct CodingDepthRow {
  std::size_t depth = 0;
  // Distance between codes of the same word at this depth and the next
  // deeper one (the sampling horizon for the deepest row).
  double succ_median = 0.0, succ_p90 = 0.0, succ_max = 0.0;
  // Distance between codes at this depth from representative starts and
  // from perturbed same-part starts.
  double start_median = 0.0, start_p90 = 0.0, start_max = 0.0;
};

struct CodingReport {
  std::vector<CodingDepthRow> rows;
  std::size_t words = 0;
  std::size_t horizon = 0;  // sampled word length, 2x the deepest grid depth
  std::uint64_t master_seed = 0;
};

// Convergence diagnostic for the word-to-state coding: samples word_count
// pasts by running the chain forward from states of an internally built
// empirical measure, codes each past at every grid depth, and summarizes
// successive-depth and start-dependence distances.
CodingReport coding_convergence(const MarkovSystem& sys, std::uint64_t master_seed,
                                const std::vector<std::size_t>& depth_grid,
                                std::size_t word_count);

// log probability of continuing the coded past with next_edge:
// log p_{next_edge}(code of w). At least log delta for admissible
// continuations. Throws InadmissibleWord when next_edge does not continue w.
double energy_u(const MarkovSystem& sys, const BackwardWord& w, int next_edge);

// Running symbol-count difference over suffixes of a binary word: entry n-1
// is (#1s - #0s) among the last n symbols. Throws WrongAlphabet for symbols
// outside {0, 1}.
std::vector<long long> y_drift(const std::vector<int>& word);

struct HolderFitReport {
  double alpha = 0.0;      // fitted exponent of d(F w, F w') vs word distance
  double log_c = 0.0;      // intercept covering `coverage` of the pairs
  double coverage = 0.0;   // fraction of pairs below the fitted line
  std::size_t pairs = 0;
  std::size_t depth = 0;
};

// Regularity diagnostic of the coding map at a common depth: word pairs are
// built by regenerating the past beyond a controlled shared suffix, so the
// word distance takes the exact values 2^-k. Fits log-coded-distance
// against log-word-distance by least squares and reports the exponent and a
// 95th-percentile intercept; values are descriptive, not a certification.
HolderFitReport holder_diagnostic(const MarkovSystem& sys, std::uint64_t master_seed,
                                  std::size_t depth = 2000,
                                  const std::vector<std::size_t>& suffix_lengths =
                                      {4, 16, 64, 256, 1024},
                                  std::size_t pairs_per_length = 60);

}  // namespace cms
