#include "cms/simulate.hpp"

#include <cmath>
#include <limits>

#include "cms/errors.hpp"

namespace cms {

StepResult step_with_uniform(const MarkovSystem& sys, const Point& x, double u) {
  int v = sys.vertex_of_or_throw(x);
  const auto& out = sys.graph().out_edges(v);
  StepResult r;
  double cum = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double p = sys.edge_prob(out[i], x);
    cum = (i + 1 == out.size()) ? 1.0 : cum + p;  // clamp so the draw always lands
    if (u < cum) {
      r.edge = out[i];
      r.prob = p;
      r.state = sys.apply_map(out[i], x);
      return r;
    }
  }
  // Unreachable: the final cumulative sum is exactly 1 and u < 1.
  r.edge = out.back();
  r.prob = sys.edge_prob(out.back(), x);
  r.state = sys.apply_map(out.back(), x);
  return r;
}

StepResult step(const MarkovSystem& sys, const Point& x, RngStream& rng) {
  return step_with_uniform(sys, x, rng.next_unit());
}

Trajectory run(const MarkovSystem& sys, const Point& x0, std::size_t n,
               std::uint64_t master_seed, std::uint64_t stream_id) {
  Trajectory t;
  t.start = x0;
  t.master_seed = master_seed;
  t.stream_id = stream_id;
  t.states.reserve(n + 1);
  t.word.reserve(n);
  t.states.push_back(x0);
  RngStream rng(master_seed, stream_id);
  for (std::size_t k = 0; k < n; ++k) {
    StepResult s = step(sys, t.states.back(), rng);
    t.word.push_back(s.edge);
    t.states.push_back(std::move(s.state));
  }
  return t;
}

double cylinder_prob(const MarkovSystem& sys, const Point& x, std::span<const int> word) {
  if (word.empty()) return 1.0;
  auto v = sys.vertex_of(x);
  if (!v) return 0.0;
  int at = *v;
  Point cur = x;
  double prob = 1.0;
  for (int e : word) {
    if (sys.graph().source(e) != at) return 0.0;
    prob *= sys.edge_prob(e, cur);
    cur = sys.apply_map(e, cur);
    at = sys.graph().target(e);
  }
  return prob;
}

double log_cylinder_prob(const MarkovSystem& sys, const Point& x, std::span<const int> word) {
  if (word.empty()) return 0.0;
  auto v = sys.vertex_of(x);
  if (!v) return -std::numeric_limits<double>::infinity();
  int at = *v;
  Point cur = x;
  double logp = 0.0;
  for (int e : word) {
    if (sys.graph().source(e) != at) return -std::numeric_limits<double>::infinity();
    double p = sys.edge_prob(e, cur);
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    logp += std::log(p);
    cur = sys.apply_map(e, cur);
    at = sys.graph().target(e);
  }
  return logp;
}

double apply_U(const MarkovSystem& sys, const StateFn& f, const Point& x) {
  int v = sys.vertex_of_or_throw(x);
  double sum = 0.0;
  for (int e : sys.graph().out_edges(v)) sum += sys.edge_prob(e, x) * f(sys.apply_map(e, x));
  return sum;
}

namespace {

struct ExactAccum {
  double sum = 0.0, comp = 0.0;  // Kahan compensation keeps deep sums tight
  std::uint64_t terms = 0;
  std::uint64_t clipped = 0;
  std::uint64_t cap = 0;
  double clip_bound = 0.0;

  void add(double v) {
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Depth-first enumeration of admissible words in declared edge order,
// carrying the orbit point and running probability. leaves_only sums
// prob * f at depth-n endpoints; otherwise every node contributes.
void enumerate_exact(const MarkovSystem& sys, const StateFn& f, const Point& x, double prob,
                     std::size_t remaining, bool leaves_only, ExactAccum& acc) {
  if (!leaves_only || remaining == 0) {
    if (++acc.terms > acc.cap) throw CapExceeded("exact enumeration exceeds term cap");
    acc.add(prob * clip_value(f(x), acc.clip_bound, acc.clipped));
  }
  if (remaining == 0) return;
  int vx = sys.vertex_of_or_throw(x);
  for (int e : sys.graph().out_edges(vx))
    enumerate_exact(sys, f, sys.apply_map(e, x), prob * sys.edge_prob(e, x), remaining - 1,
                    leaves_only, acc);
}

}  // namespace

ExactOperatorResult iterate_U_exact(const MarkovSystem& sys, const StateFn& f, const Point& x,
                                    std::size_t n, std::uint64_t term_cap, double clip_bound) {
  ExactAccum acc;
  acc.cap = term_cap;
  acc.clip_bound = clip_bound;
  if (n == 0) {
    std::uint64_t clipped = 0;
    double v = clip_value(f(x), clip_bound, clipped);
    return {v, 1, clipped};
  }
  enumerate_exact(sys, f, x, 1.0, n, true, acc);
  return {acc.sum, acc.terms, acc.clipped};
}

ExactOperatorResult cesaro_U_exact(const MarkovSystem& sys, const StateFn& f, const Point& x,
                                   std::size_t n, std::uint64_t term_cap, double clip_bound) {
  if (n == 0) throw InvalidParams("Cesaro average needs n >= 1");
  ExactAccum acc;
  acc.cap = term_cap;
  acc.clip_bound = clip_bound;
  // Every node of the word tree down to depth n-1 contributes once.
  enumerate_exact(sys, f, x, 1.0, n - 1, false, acc);
  return {acc.sum / static_cast<double>(n), acc.terms, acc.clipped};
}

namespace {

McOperatorResult mc_over_trajectories(const MarkovSystem& sys, const StateFn& f, const Point& x,
                                      std::size_t n, std::uint64_t trajectories,
                                      std::uint64_t master_seed, std::uint64_t stream_base,
                                      unsigned jobs, double clip_bound, bool cesaro) {
  if (trajectories == 0) throw InvalidParams("need at least one trajectory");
  std::vector<double> values(trajectories);
  std::vector<std::uint64_t> clips(trajectories, 0);
  parallel_for(trajectories, jobs, [&](std::size_t j) {
    RngStream rng(master_seed, stream_base + j);
    Point cur = x;
    if (cesaro) {
      // (1/n) sum_{k=0..n-1} f(x_k) along one path.
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += clip_value(f(cur), clip_bound, clips[j]);
        if (k + 1 < n) cur = step(sys, cur, rng).state;
      }
      values[j] = acc / static_cast<double>(n);
    } else {
      for (std::size_t k = 0; k < n; ++k) cur = step(sys, cur, rng).state;
      values[j] = clip_value(f(cur), clip_bound, clips[j]);
    }
  });
  MeanWithError me = replicate_mean(values);
  McOperatorResult out;
  out.value = me.mean;
  out.std_error = me.std_error;
  out.trajectories = trajectories;
  for (std::uint64_t c : clips) out.clipped += c;
  return out;
}

}  // namespace

McOperatorResult iterate_U_mc(const MarkovSystem& sys, const StateFn& f, const Point& x,
                              std::size_t n, std::uint64_t trajectories,
                              std::uint64_t master_seed, std::uint64_t stream_base,
                              unsigned jobs, double clip_bound) {
  return mc_over_trajectories(sys, f, x, n, trajectories, master_seed, stream_base, jobs,
                              clip_bound, false);
}

McOperatorResult cesaro_U_mc(const MarkovSystem& sys, const StateFn& f, const Point& x,
                             std::size_t n, std::uint64_t trajectories,
                             std::uint64_t master_seed, std::uint64_t stream_base, unsigned jobs,
                             double clip_bound) {
  if (n == 0) throw InvalidParams("Cesaro average needs n >= 1");
  return mc_over_trajectories(sys, f, x, n, trajectories, master_seed, stream_base, jobs,
                              clip_bound, true);
}

}  // namespace cms
