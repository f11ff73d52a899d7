#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cms/point.hpp"
#include "cms/rng.hpp"
#include "cms/stats.hpp"
#include "cms/system.hpp"

namespace cms {

using StateFn = std::function<double(const Point&)>;

struct StepResult {
  int edge = -1;
  Point state;
  double prob = 0.0;  // probability of the chosen edge at the previous state
};

// One chain step driven by a given uniform draw: inverse-CDF selection over
// the out-edges of the current vertex in declaration order, with the final
// cumulative sum clamped to 1 so the draw always lands. Throws OrphanPoint
// when x lies in no vertex set.
StepResult step_with_uniform(const MarkovSystem& sys, const Point& x, double u);

// One chain step consuming exactly one uniform from the stream.
StepResult step(const MarkovSystem& sys, const Point& x, RngStream& rng);

struct Trajectory {
  Point start;
  std::vector<int> word;      // edges taken, word[k] leads from states[k]
  std::vector<Point> states;  // states[0] = start, size n+1
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

// n chain steps from x0. Draw k of the stream decides step k, so replays
// are bit-identical for equal (master_seed, stream_id).
Trajectory run(const MarkovSystem& sys, const Point& x0, std::size_t n,
               std::uint64_t master_seed, std::uint64_t stream_id);

// Probability of observing `word` from x: the product of edge probabilities
// along the word's orbit. Zero when the word does not follow the graph from
// x's vertex; the empty word has probability 1.
double cylinder_prob(const MarkovSystem& sys, const Point& x, std::span<const int> word);

// log of cylinder_prob accumulated additively (usable far beyond double
// underflow depth); -infinity for inadmissible words.
double log_cylinder_prob(const MarkovSystem& sys, const Point& x, std::span<const int> word);

// One application of the transfer operator: sum of p_e(x) f(edge image of x)
// over the out-edges of x's vertex.
double apply_U(const MarkovSystem& sys, const StateFn& f, const Point& x);

struct ExactOperatorResult {
  double value = 0.0;
  std::uint64_t terms = 0;    // admissible words enumerated
  std::uint64_t clipped = 0;  // f evaluations clipped at the bound
};

// n-fold transfer operator by exact enumeration of admissible words from
// x's vertex. Throws CapExceeded when more than term_cap words would be
// needed. f values are clipped at clip_bound.
ExactOperatorResult iterate_U_exact(const MarkovSystem& sys, const StateFn& f, const Point& x,
                                    std::size_t n, std::uint64_t term_cap = 10'000'000,
                                    double clip_bound = kDefaultClipBound);

// Cesaro average (1/n) sum_{k=0..n-1} U^k f (x) by exact enumeration.
ExactOperatorResult cesaro_U_exact(const MarkovSystem& sys, const StateFn& f, const Point& x,
                                   std::size_t n, std::uint64_t term_cap = 10'000'000,
                                   double clip_bound = kDefaultClipBound);

struct McOperatorResult {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t trajectories = 0;
  std::uint64_t clipped = 0;
};

// Monte Carlo U^n f(x): mean of f at step n over independent trajectories
// on streams stream_base + j.
McOperatorResult iterate_U_mc(const MarkovSystem& sys, const StateFn& f, const Point& x,
                              std::size_t n, std::uint64_t trajectories,
                              std::uint64_t master_seed, std::uint64_t stream_base = 0,
                              unsigned jobs = 1, double clip_bound = kDefaultClipBound);

// Monte Carlo Cesaro average over independent trajectories.
McOperatorResult cesaro_U_mc(const MarkovSystem& sys, const StateFn& f, const Point& x,
                             std::size_t n, std::uint64_t trajectories,
                             std::uint64_t master_seed, std::uint64_t stream_base = 0,
                             unsigned jobs = 1, double clip_bound = kDefaultClipBound);

}  // namespace cms
