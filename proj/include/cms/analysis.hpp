#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cms/point.hpp"
#include "cms/system.hpp"

namespace cms {

// Average one-step contraction ratio at a same-part pair:
//   sum_e p_e(x) d(w_e x, w_e y) / d(x, y).
// Throws VertexMismatch when x and y lie in different parts, InvalidParams
// when d(x, y) = 0.
double contraction_ratio(const MarkovSystem& sys, const Point& x, const Point& y);

struct RateReport {
  double max_ratio = 0.0;
  double deterministic_max = 0.0;  // representative- and origin-anchored stratum
  std::vector<double> per_vertex_max;
  Point argmax_x, argmax_y;
  int argmax_vertex = 0;
  std::uint64_t pairs = 0;
  std::uint64_t budget = 0;
  std::uint64_t master_seed = 0;
};

// Estimates the best average contraction ratio by maximizing over sampled
// same-part pairs: a deterministic stratum of axis-aligned pairs anchored at
// representatives (and the origin when admissible), a random stratum of
// axis-aligned pairs at scales {1e-3, 1e-2, 1e-1} of the box diameter, and
// uniform pairs. A reported maximum is a certified lower bound on the
// true supremum; pairs are replayable from (master_seed).
RateReport estimate_contraction_rate(const MarkovSystem& sys, std::uint64_t pair_budget,
                                     std::uint64_t master_seed);

// Modulus-of-continuity profile over the scale grid t_n = b * c^n,
// n = 1..size. The grid is stored through (b, c) because deep scales fall
// below the smallest positive double; scale(n) underflows to 0 honestly.
struct ModulusProfile {
  enum class Mode { SampledLowerBound, ExactClosedForm };

  double b = 1.0;
  double c = 0.5;
  std::vector<double> phi;  // phi[i] is the modulus at scale t_{i+1}
  Mode mode = Mode::SampledLowerBound;

  std::size_t size() const { return phi.size(); }
  double scale(std::size_t n) const;  // t_n, 1-based
};

// Sampled lower-bound profile of sup |fn(x) - fn(y)| over pairs at distance
// <= t_n within the given vertex part; pair_budget pairs per scale. The
// result is made monotone in t.
ModulusProfile modulus_profile(const std::function<double(const Point&)>& fn, int vertex,
                               const MarkovSystem& sys, double b, double c, std::size_t n_scales,
                               std::uint64_t pair_budget, std::uint64_t master_seed);

// Exact profile from a system's registered modulus envelope.
ModulusProfile envelope_profile(const MarkovSystem& sys, double b, double c,
                                std::size_t n_scales);

// Modulus value alpha/n at scale c^n for the slowly varying probability
// family p(x) = alpha / log(1/x) + delta with c = 1/e. delta does not enter
// the value; both parameters are validated.
double jo_modulus(double alpha, double delta, std::size_t n);

// Exact profile of the family above: phi[n-1] = alpha/n, c = 1/e.
ModulusProfile jo_profile(double alpha, std::size_t n_scales);

enum class VariationClass { Dini, SquareSummableNotDini, NeitherDetected, Inconclusive };

const char* variation_class_name(VariationClass c);

struct VariationReport {
  VariationClass cls = VariationClass::Inconclusive;
  double s1 = 0.0;  // partial sum of phi
  double s2 = 0.0;  // partial sum of phi^2
  double s1_last_increment = 0.0;  // S1(N) - S1(N/10)
  double s1_prev_increment = 0.0;  // S1(N/10) - S1(N/100)
  double s2_last_increment = 0.0;
  double s2_prev_increment = 0.0;
  bool s1_converged = false;
  bool s2_converged = false;
  std::size_t n_terms = 0;
  double tail_threshold = 0.0;
};

// Classifies the summability of the profile from partial sums over the first
// n_partial scales. A series counts as converged when its last decade
// increment is at most tail_threshold and at most half the previous decade
// increment. Divergence claims (the non-dini classes) are made only for
// exact profiles; a sampled lower bound that fails to converge is
// inconclusive.
VariationReport variation_class(const ModulusProfile& profile, std::size_t n_partial,
                                double tail_threshold = 1e-3);

struct MomentBoundReport {
  double c_max = 0.0;   // max_e d(w_e x_{source(e)}, x_{target(e)})
  double bound = 0.0;   // c_max / (1 - rate)
  int argmax_edge = 0;
  double rate = 0.0;
};

// Bound on the stationary mean distance to the representatives, from the
// one-step displacement of representatives and the declared rate. Throws
// MissingRate when the system declares none.
MomentBoundReport moment_bound(const MarkovSystem& sys);

}  // namespace cms
