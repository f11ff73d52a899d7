#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cms/point.hpp"
#include "cms/system.hpp"

namespace cms {

// Likelihood-ratio path for two starts x, y in the same vertex part,
// observed along one edge word. Index k holds the values after k symbols
// (index 0: X=1, Y=Z=0).
//
//   X_k = prod_i p_i(y-orbit) / p_i(x-orbit)     (ratio of word probabilities)
//   Y_k = sum_i (p_i^y - p_i^x) / p_i^y          (martingale part under y)
//   Z_k = delta^-2 sum_i (p_i^y - p_i^x)^2       (compensator part)
//
// log X_k <= Y_k + Z_k pointwise.
struct MartingalePath {
  std::vector<int> word;
  std::vector<double> x_ratio;  // X_k
  std::vector<double> y_part;   // Y_k
  std::vector<double> z_part;   // Z_k
  std::vector<double> px, py;   // per-step probabilities along both orbits
};

// Throws VertexMismatch when x and y lie in different parts and
// InadmissibleWord when the word breaks the graph. Steps where both
// probabilities vanish contribute by the 0/0 = 0 convention.
MartingalePath likelihood_path(const MarkovSystem& sys, const Point& x, const Point& y,
                               std::span<const int> word);

// Exact check that X_n averages to the y-word-probability on every cylinder:
// max over depth-(<= n) words C of |E_x[X_n 1_C] - prob_y(C)|, by full
// enumeration (CapExceeded beyond term_cap nodes). Zero in exact arithmetic.
double martingale_check_exact(const MarkovSystem& sys, const Point& x, const Point& y,
                              std::size_t n, std::uint64_t term_cap = 10'000'000);

// Exact check of the increment property of Y: max over depth-n words C of
// |E_y[(Y_{n+1} - Y_n) 1_C]|. Zero in exact arithmetic.
double y_martingale_check_exact(const MarkovSystem& sys, const Point& x, const Point& y,
                                std::size_t n, std::uint64_t term_cap = 10'000'000);

struct VarianceBoundReport {
  double estimate = 0.0;   // Monte Carlo E_y[Y_n^2]
  double std_error = 0.0;
  double bound = 0.0;      // delta^-2 (sum_i a^{i/2} + sum_i env(a^{i/2} d(x,y))^2)
  std::size_t n = 0;
  std::uint64_t paths = 0;
  bool within = false;     // estimate <= bound + 3 std errors
};

// Simulates paths under the y-measure (both orbits driven by the same
// edges) and compares E[Y_n^2] against the a-priori bound built from the
// declared rate and registered modulus envelope. Throws MissingRate /
// MissingModulus when the system lacks them.
VarianceBoundReport variance_bound_check(const MarkovSystem& sys, const Point& x, const Point& y,
                                         std::size_t n, std::uint64_t mc_budget,
                                         std::uint64_t master_seed, unsigned jobs = 1);

struct TailBoundRow {
  std::size_t i = 0;
  double freq = 0.0;       // empirical y-probability that d(orbits) exceeds the bound
  double bound = 0.0;      // a^{i/2}
  double std_error = 0.0;  // binomial
  bool flagged = false;    // freq beyond bound + 3 std errors
};

// Empirical check of the orbit-separation tail events: under the y-measure,
// d(x-orbit_i, y-orbit_i) > a^{i/2} d(x, y) should occur with probability at
// most a^{i/2}, for i = 1..i_max.
std::vector<TailBoundRow> tail_bound_check(const MarkovSystem& sys, const Point& x,
                                           const Point& y, std::size_t i_max,
                                           std::uint64_t mc_budget, std::uint64_t master_seed,
                                           unsigned jobs = 1);

struct UniformIntegrabilityRow {
  double threshold = 0.0;
  double sup_freq = 0.0;  // sup over n <= n_max of P_y(log X_n > threshold)
};

// Descriptive table of log X_n exceedance frequencies over a threshold
// grid; nonincreasing in the threshold by construction.
std::vector<UniformIntegrabilityRow> uniform_integrability_table(
    const MarkovSystem& sys, const Point& x, const Point& y, std::size_t n_max,
    std::span<const double> thresholds, std::uint64_t mc_budget, std::uint64_t master_seed);

}  // namespace cms
