#include "cms/martingale.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "cms/errors.hpp"
#include "cms/simulate.hpp"
#include "cms/stats.hpp"

namespace cms {

namespace {

int shared_vertex(const MarkovSystem& sys, const Point& x, const Point& y) {
  int vx = sys.vertex_of_or_throw(x);
  int vy = sys.vertex_of_or_throw(y);
  if (vx != vy) throw VertexMismatch("pair spans vertex sets " + std::to_string(vx) + " and " +
                                     std::to_string(vy));
  return vx;
}

}  // namespace

MartingalePath likelihood_path(const MarkovSystem& sys, const Point& x, const Point& y,
                               std::span<const int> word) {
  int v = shared_vertex(sys, x, y);
  const auto& g = sys.graph();
  MartingalePath path;
  path.word.assign(word.begin(), word.end());
  path.x_ratio.push_back(1.0);
  path.y_part.push_back(0.0);
  path.z_part.push_back(0.0);
  double inv_d2 = 1.0 / (sys.delta() * sys.delta());
  Point cx = x, cy = y;
  double X = 1.0, Y = 0.0, Z = 0.0;
  for (std::size_t k = 0; k < word.size(); ++k) {
    int e = word[k];
    if (e < 0 || e >= g.edge_count() || g.source(e) != v)
      throw InadmissibleWord("word breaks the graph at position " + std::to_string(k));
    double px = sys.edge_prob(e, cx);
    double py = sys.edge_prob(e, cy);
    path.px.push_back(px);
    path.py.push_back(py);
    // Ratio factor py/px; a vanishing numerator or denominator zeroes the
    // ratio for good (the 0/0 = 0 convention, and px = 0 makes the cylinder
    // x-null anyway).
    if (X != 0.0) {
      if (px > 0.0)
        X *= py / px;
      else if (py > 0.0)
        X = std::numeric_limits<double>::infinity();
      else
        X = 0.0;
    }
    if (py > 0.0) Y += (py - px) / py;
    Z += (py - px) * (py - px) * inv_d2;
    path.x_ratio.push_back(X);
    path.y_part.push_back(Y);
    path.z_part.push_back(Z);
    cx = sys.apply_map(e, cx);
    cy = sys.apply_map(e, cy);
    v = g.target(e);
  }
  return path;
}

namespace {

struct ExactWalk {
  const MarkovSystem& sys;
  std::uint64_t cap;
  std::uint64_t nodes = 0;
  double max_disc = 0.0;

  void bump() {
    if (++nodes > cap) throw CapExceeded("cylinder enumeration exceeds term cap");
  }

  // Returns sum over depth-n extensions of the prefix of P_x * X_n, which
  // the martingale property says equals P_y(prefix); tracks the worst gap.
  double ratio_mass(const Point& cx, const Point& cy, int v, double prob_x, double prob_y,
                    std::size_t remaining) {
    bump();
    double sum;
    if (remaining == 0) {
      sum = prob_x == 0.0 ? 0.0 : prob_x * (prob_y / prob_x);
    } else {
      sum = 0.0;
      for (int e : sys.graph().out_edges(v))
        sum += ratio_mass(sys.apply_map(e, cx), sys.apply_map(e, cy), sys.graph().target(e),
                          prob_x * sys.edge_prob(e, cx), prob_y * sys.edge_prob(e, cy),
                          remaining - 1);
    }
    max_disc = std::max(max_disc, std::fabs(sum - prob_y));
    return sum;
  }

  // Visits every depth-n word, reporting E_y[(Y_{n+1} - Y_n) 1_word].
  void y_increment(const Point& cx, const Point& cy, int v, double prob_y,
                   std::size_t remaining) {
    bump();
    if (remaining == 0) {
      double inc = 0.0;
      for (int e : sys.graph().out_edges(v)) {
        double py = sys.edge_prob(e, cy);
        if (py > 0.0) inc += py * ((py - sys.edge_prob(e, cx)) / py);
      }
      max_disc = std::max(max_disc, std::fabs(prob_y * inc));
      return;
    }
    for (int e : sys.graph().out_edges(v))
      y_increment(sys.apply_map(e, cx), sys.apply_map(e, cy), sys.graph().target(e),
                  prob_y * sys.edge_prob(e, cy), remaining - 1);
  }
};

}  // namespace

double martingale_check_exact(const MarkovSystem& sys, const Point& x, const Point& y,
                              std::size_t n, std::uint64_t term_cap) {
  int v = shared_vertex(sys, x, y);
  ExactWalk walk{sys, term_cap};
  walk.ratio_mass(x, y, v, 1.0, 1.0, n);
  return walk.max_disc;
}

double y_martingale_check_exact(const MarkovSystem& sys, const Point& x, const Point& y,
                                std::size_t n, std::uint64_t term_cap) {
  int v = shared_vertex(sys, x, y);
  ExactWalk walk{sys, term_cap};
  walk.y_increment(x, y, v, 1.0, n);
  return walk.max_disc;
}

namespace {

// One coupled step under the y-measure: the edge is drawn from the y-orbit's
// probabilities and applied to both orbits.
struct CoupledStep {
  int edge;
  double px, py;
};

CoupledStep coupled_step(const MarkovSystem& sys, Point& cx, Point& cy, RngStream& rng) {
  StepResult s = step(sys, cy, rng);
  double px = sys.edge_prob(s.edge, cx);
  cx = sys.apply_map(s.edge, cx);
  cy = std::move(s.state);
  return {s.edge, px, s.prob};
}

}  // namespace

VarianceBoundReport variance_bound_check(const MarkovSystem& sys, const Point& x, const Point& y,
                                         std::size_t n, std::uint64_t mc_budget,
                                         std::uint64_t master_seed, unsigned jobs) {
  shared_vertex(sys, x, y);
  if (!sys.rate()) throw MissingRate("variance bound needs a declared contraction rate");
  if (!sys.modulus_envelope())
    throw MissingModulus("variance bound needs a registered modulus envelope");
  if (n < 1 || mc_budget < 2) throw InvalidParams("need n >= 1 and at least two paths");

  VarianceBoundReport rep;
  rep.n = n;
  rep.paths = mc_budget;
  double a = *sys.rate();
  double d0 = distance(sys.metric(), x, y);
  const auto& env = *sys.modulus_envelope();
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    double ai = std::pow(a, static_cast<double>(i) / 2.0);
    double ev = env(ai * d0);
    sum += ai + ev * ev;
  }
  rep.bound = sum / (sys.delta() * sys.delta());

  std::vector<double> per_path(mc_budget, 0.0);
  parallel_for(mc_budget, jobs, [&](std::size_t j) {
    RngStream rng(master_seed, j);
    Point cx = x, cy = y;
    double Y = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      CoupledStep s = coupled_step(sys, cx, cy, rng);
      if (s.py > 0.0) Y += (s.py - s.px) / s.py;
    }
    per_path[j] = Y * Y;
  });
  MeanWithError m = replicate_mean(per_path);
  rep.estimate = m.mean;
  rep.std_error = m.std_error;
  rep.within = rep.estimate <= rep.bound + 3.0 * rep.std_error;
  return rep;
}

std::vector<TailBoundRow> tail_bound_check(const MarkovSystem& sys, const Point& x,
                                           const Point& y, std::size_t i_max,
                                           std::uint64_t mc_budget, std::uint64_t master_seed,
                                           unsigned jobs) {
  shared_vertex(sys, x, y);
  if (!sys.rate()) throw MissingRate("tail bound needs a declared contraction rate");
  if (i_max < 1 || mc_budget < 1) throw InvalidParams("need i_max >= 1 and at least one path");
  double a = *sys.rate();
  double d0 = distance(sys.metric(), x, y);

  std::vector<std::vector<unsigned char>> hits(mc_budget);
  parallel_for(mc_budget, jobs, [&](std::size_t j) {
    RngStream rng(master_seed, j);
    Point cx = x, cy = y;
    std::vector<unsigned char> row(i_max, 0);
    for (std::size_t i = 1; i <= i_max; ++i) {
      coupled_step(sys, cx, cy, rng);
      double sep = distance(sys.metric(), cx, cy);
      row[i - 1] = sep > std::pow(a, static_cast<double>(i) / 2.0) * d0 ? 1 : 0;
    }
    hits[j] = std::move(row);
  });

  std::vector<TailBoundRow> rows(i_max);
  double m = static_cast<double>(mc_budget);
  for (std::size_t i = 1; i <= i_max; ++i) {
    std::uint64_t count = 0;
    for (std::uint64_t j = 0; j < mc_budget; ++j) count += hits[j][i - 1];
    TailBoundRow& r = rows[i - 1];
    r.i = i;
    r.freq = static_cast<double>(count) / m;
    r.bound = std::pow(a, static_cast<double>(i) / 2.0);
    r.std_error = std::sqrt(r.freq * (1.0 - r.freq) / m);
    r.flagged = r.freq > r.bound + 3.0 * r.std_error;
  }
  return rows;
}

std::vector<UniformIntegrabilityRow> uniform_integrability_table(
    const MarkovSystem& sys, const Point& x, const Point& y, std::size_t n_max,
    std::span<const double> thresholds, std::uint64_t mc_budget, std::uint64_t master_seed) {
  shared_vertex(sys, x, y);
  if (n_max < 1 || mc_budget < 1) throw InvalidParams("need n_max >= 1 and at least one path");
  std::size_t nt = thresholds.size();
  // exceed[t][n-1]: paths whose running log X_n passed thresholds[t].
  std::vector<std::vector<std::uint64_t>> exceed(nt, std::vector<std::uint64_t>(n_max, 0));
  for (std::uint64_t j = 0; j < mc_budget; ++j) {
    RngStream rng(master_seed, j);
    Point cx = x, cy = y;
    double log_x = 0.0;
    for (std::size_t k = 1; k <= n_max; ++k) {
      CoupledStep s = coupled_step(sys, cx, cy, rng);
      if (s.px > 0.0 && s.py > 0.0)
        log_x += std::log(s.py / s.px);
      else
        log_x = -std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < nt; ++t)
        if (log_x > thresholds[t]) ++exceed[t][k - 1];
    }
  }
  std::vector<UniformIntegrabilityRow> rows(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    rows[t].threshold = thresholds[t];
    std::uint64_t worst = 0;
    for (std::size_t k = 0; k < n_max; ++k) worst = std::max(worst, exceed[t][k]);
    rows[t].sup_freq = static_cast<double>(worst) / static_cast<double>(mc_budget);
  }
  return rows;
}

}  // namespace cms
