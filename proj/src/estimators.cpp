#include "cms/estimators.hpp"

#include <cmath>

#include "cms/errors.hpp"

namespace cms {

EstimateWithError ergodic_average(const MarkovSystem& sys, const Point& x, const EdgeStateFn& f,
                                  std::size_t n, std::uint64_t master_seed,
                                  std::uint64_t stream_id, std::size_t batches,
                                  double clip_bound) {
  if (n < 1) throw InvalidParams("ergodic average needs at least one step");
  EstimateWithError est;
  est.master_seed = master_seed;
  est.stream_id = stream_id;
  RngStream rng(master_seed, stream_id);
  std::vector<double> series;
  series.reserve(n);
  Point cur = x;
  for (std::size_t k = 0; k < n; ++k) {
    StepResult s = step(sys, cur, rng);
    series.push_back(clip_value(f(s.edge, cur), clip_bound, est.clipped));
    cur = std::move(s.state);
  }
  MeanWithError m = batch_means(series, batches);
  est.value = m.mean;
  est.std_error = m.std_error;
  est.n = m.n;
  est.batches = m.batches;
  return est;
}

EstimateWithError estimate_entropy_lyapunov(const MarkovSystem& sys, const Point& x,
                                            std::size_t n, std::size_t trajectories,
                                            std::uint64_t master_seed,
                                            std::uint64_t stream_base, unsigned jobs) {
  if (n < 1) throw InvalidParams("entropy estimate needs at least one step");
  if (trajectories < 1) throw InvalidParams("need at least one trajectory");
  std::vector<double> per_traj(trajectories, 0.0);
  parallel_for(trajectories, jobs, [&](std::size_t j) {
    RngStream rng(master_seed, stream_base + j);
    Point cur = x;
    double log_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      StepResult s = step(sys, cur, rng);
      log_sum += std::log(s.prob);
      cur = std::move(s.state);
    }
    per_traj[j] = -log_sum / static_cast<double>(n);
  });
  MeanWithError m = replicate_mean(per_traj);
  EstimateWithError est;
  est.value = m.mean;
  est.std_error = m.std_error;
  est.n = trajectories;
  est.master_seed = master_seed;
  est.stream_id = stream_base;
  est.batches = m.batches;
  return est;
}

EstimateWithError estimate_entropy_integral(const MarkovSystem& sys, const Point& x,
                                            std::size_t n, std::uint64_t master_seed,
                                            std::uint64_t stream_id, std::size_t batches) {
  if (n < 1) throw InvalidParams("entropy estimate needs at least one step");
  RngStream rng(master_seed, stream_id);
  std::vector<double> series;
  series.reserve(n);
  Point cur = x;
  for (std::size_t k = 0; k < n; ++k) {
    int v = sys.vertex_of_or_throw(cur);
    double h = 0.0;
    for (double p : sys.out_probs(v, cur))
      if (p > 0.0) h -= p * std::log(p);
    series.push_back(h);
    cur = step(sys, cur, rng).state;
  }
  MeanWithError m = batch_means(series, batches);
  EstimateWithError est;
  est.value = m.mean;
  est.std_error = m.std_error;
  est.n = m.n;
  est.master_seed = master_seed;
  est.stream_id = stream_id;
  est.batches = m.batches;
  return est;
}

EmpiricalMeasure empirical_measure(const MarkovSystem& sys, const Point& x0, std::size_t n,
                                   std::size_t burnin, std::uint64_t master_seed,
                                   std::uint64_t stream_id) {
  if (burnin == kDefaultBurnin) burnin = n / 10;
  if (n < 1 || burnin >= n) throw InvalidParams("need burnin < n and n >= 1");
  Trajectory traj = run(sys, x0, n, master_seed, stream_id);
  EmpiricalMeasure mu;
  mu.start = x0;
  mu.n = n;
  mu.burnin = burnin;
  mu.master_seed = master_seed;
  mu.stream_id = stream_id;
  mu.support.assign(traj.states.begin() + static_cast<std::ptrdiff_t>(burnin + 1),
                    traj.states.end());
  return mu;
}

double measure_integral(const EmpiricalMeasure& mu, const StateFn& f) {
  if (mu.support.empty()) throw InvalidParams("empty measure support");
  std::vector<double> vals;
  vals.reserve(mu.support.size());
  for (const Point& p : mu.support) vals.push_back(f(p));
  return pairwise_mean(vals);
}

EstimateWithError markov_measure_cylinder(const MarkovSystem& sys, const EmpiricalMeasure& mu,
                                          std::span<const int> word) {
  if (mu.support.empty()) throw InvalidParams("empty measure support");
  std::vector<double> series;
  series.reserve(mu.support.size());
  for (const Point& p : mu.support) series.push_back(cylinder_prob(sys, p, word));
  MeanWithError m = batch_means(series);
  EstimateWithError est;
  est.value = m.mean;
  est.std_error = m.std_error;
  est.n = m.n;
  est.master_seed = mu.master_seed;
  est.stream_id = mu.stream_id;
  est.batches = m.batches;
  return est;
}

std::vector<StationarityRow> stationarity_check(const MarkovSystem& sys,
                                               const EmpiricalMeasure& mu,
                                               const std::vector<std::vector<int>>& words) {
  const auto& g = sys.graph();
  std::vector<StationarityRow> rows;
  rows.reserve(words.size());
  for (const auto& word : words) {
    StationarityRow row;
    row.word = word;
    if (word.empty()) {
      // Base case: one-symbol cylinders partition the space.
      row.measure = 1.0;
      for (int e = 0; e < g.edge_count(); ++e) {
        std::vector<int> one{e};
        row.extended += markov_measure_cylinder(sys, mu, one).value;
      }
    } else {
      row.measure = markov_measure_cylinder(sys, mu, word).value;
      int head = g.source(word.front());
      std::vector<int> ext(word.size() + 1);
      std::copy(word.begin(), word.end(), ext.begin() + 1);
      for (int e = 0; e < g.edge_count(); ++e) {
        if (g.target(e) != head) continue;
        ext[0] = e;
        row.extended += markov_measure_cylinder(sys, mu, ext).value;
      }
    }
    row.discrepancy = std::fabs(row.measure - row.extended);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cms
