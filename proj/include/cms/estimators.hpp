#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cms/point.hpp"
#include "cms/simulate.hpp"
#include "cms/system.hpp"

namespace cms {

using EdgeStateFn = std::function<double(int edge, const Point&)>;

inline EdgeStateFn uniform_edge_fn(StateFn f) {
  return [f = std::move(f)](int, const Point& p) { return f(p); };
}

struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;          // terms or trajectories behind the value
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t clipped = 0;
  std::size_t batches = 0;
};

// Time average (1/n) sum_{k=0..n-1} f(edge_{k+1}, x_k) along one simulated
// trajectory, where edge_{k+1} is the edge drawn at state x_k. The error bar
// comes from non-overlapping batch means (default 30 batches).
EstimateWithError ergodic_average(const MarkovSystem& sys, const Point& x, const EdgeStateFn& f,
                                  std::size_t n, std::uint64_t master_seed,
                                  std::uint64_t stream_id, std::size_t batches = 30,
                                  double clip_bound = kDefaultClipBound);

// Entropy rate from the decay of observed word probabilities:
// -(1/n) log prob of each simulated word, averaged over `trajectories`
// independent trajectories on streams stream_base + j. Log-probabilities
// accumulate additively, so depth is not limited by double underflow.
// Values are in nats.
EstimateWithError estimate_entropy_lyapunov(const MarkovSystem& sys, const Point& x,
                                            std::size_t n, std::size_t trajectories,
                                            std::uint64_t master_seed,
                                            std::uint64_t stream_base = 0, unsigned jobs = 1);

// Entropy rate as the time average of the one-step conditional entropy
// -sum_e p_e(x_k) log p_e(x_k), with batch-means error. Values are in nats.
EstimateWithError estimate_entropy_integral(const MarkovSystem& sys, const Point& x,
                                            std::size_t n, std::uint64_t master_seed,
                                            std::uint64_t stream_id, std::size_t batches = 30);

// Equal-weight atoms on the trajectory states after burn-in.
struct EmpiricalMeasure {
  std::vector<Point> support;  // x_{burnin+1} .. x_n in trajectory order
  Point start;
  std::size_t n = 0;
  std::size_t burnin = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

inline constexpr std::size_t kDefaultBurnin = static_cast<std::size_t>(-1);

// Runs the chain n steps from x0 and keeps the states after burn-in
// (default n/10) as an equal-weight measure.
EmpiricalMeasure empirical_measure(const MarkovSystem& sys, const Point& x0, std::size_t n,
                                   std::size_t burnin, std::uint64_t master_seed,
                                   std::uint64_t stream_id);

// Integral of f against the empirical measure (deterministic pairwise mean).
double measure_integral(const EmpiricalMeasure& mu, const StateFn& f);

// Estimate of the stationary word measure of `word`: the average of
// cylinder_prob(x, word) over the measure's support, with a batch-means
// error bar reflecting the support's serial correlation.
EstimateWithError markov_measure_cylinder(const MarkovSystem& sys, const EmpiricalMeasure& mu,
                                          std::span<const int> word);

struct StationarityRow {
  std::vector<int> word;
  double measure = 0.0;           // estimated mass of the word cylinder
  double extended = 0.0;          // mass summed over one-symbol left extensions
  double discrepancy = 0.0;       // |measure - extended|
};

// Shift-invariance diagnostic: the mass of a word cylinder against the total
// mass of its admissible one-symbol left extensions. The empty word compares
// total one-symbol mass to 1.
std::vector<StationarityRow> stationarity_check(const MarkovSystem& sys,
                                               const EmpiricalMeasure& mu,
                                               const std::vector<std::vector<int>>& words);

}  // namespace cms
