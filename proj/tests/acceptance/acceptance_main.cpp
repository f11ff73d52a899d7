// Acceptance harness: end-to-end checks of the library's numerical claims
// on the bundled systems, with fixed seeds. One line per criterion.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cms/analysis.hpp"
#include "cms/coding.hpp"
#include "cms/errors.hpp"
#include "cms/estimators.hpp"
#include "cms/martingale.hpp"
#include "cms/point.hpp"
#include "cms/simulate.hpp"
#include "cms/system.hpp"

namespace {

using namespace cms;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void criterion(int k, const char* name, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt("exception: %s", e.what())};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] C%d %s (%s) [%.1fs]\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str(),
              secs);
  std::fflush(stdout);
  if (!o.pass) ++g_failures;
}

double entropy2(double p, double q) { return -(p * std::log(p) + q * std::log(q)); }

void collect_words(const DirectedMultigraph& g, int v, std::size_t depth, std::vector<int>& cur,
                   std::vector<std::vector<int>>& out) {
  if (cur.size() == depth) {
    out.push_back(cur);
    return;
  }
  for (int e : g.out_edges(v)) {
    cur.push_back(e);
    collect_words(g, g.target(e), depth, cur, out);
    cur.pop_back();
  }
}

Outcome c1_rate() {
  MarkovSystem r1 = make_builtin("example_r1");
  RateReport a = estimate_contraction_rate(r1, 1'000'000, 2024);
  bool det_ok = std::fabs(a.deterministic_max - 0.9375) <= 1e-12;
  bool r1_ok = det_ok && a.max_ratio <= 0.9375 + 1e-9 && a.max_ratio >= 0.93;

  MarkovSystem r2 = make_builtin("example_r2");
  RateReport b = estimate_contraction_rate(r2, 1'000'000, 2024);
  double declared = *r2.rate();
  bool r2_ok = b.max_ratio <= declared + 1e-9 && b.max_ratio >= 0.985;

  return {r1_ok && r2_ok,
          fmt("r1 max %.12f det %.12f, r2 max %.12f <= %.12f", a.max_ratio, a.deterministic_max,
              b.max_ratio, declared)};
}

Outcome c2_axioms() {
  double worst_dev = 0.0;
  double worst_margin = 1.0;
  bool all = true;
  for (const char* name : {"example_r1", "example_r2", "gmarkov:0.7,0.3,0.4,0.6"}) {
    MarkovSystem sys = make_builtin(name);
    ValidationReport r = validate(sys, 10'000, 7);
    all = all && r.pass && r.max_sum_deviation <= 1e-12 && r.min_prob >= sys.delta() &&
          r.target_violations == 0;
    worst_dev = std::max(worst_dev, r.max_sum_deviation);
    worst_margin = std::min(worst_margin, r.min_prob - sys.delta());
  }
  return {all, fmt("max row-sum dev %.2e, min prob-over-delta margin %.3e", worst_dev,
                   worst_margin)};
}

Outcome c3_variation() {
  VariationReport big = variation_class(jo_profile(0.5, 1'000'000), 1'000'000);
  VariationReport small = variation_class(jo_profile(0.5, 100'000), 100'000);
  bool cls_ok = big.cls == VariationClass::SquareSummableNotDini;
  bool s2_ok = big.s2 >= 0.410 && big.s2 <= 0.41124 && big.s2_converged;
  bool s1_ok = big.s1 >= 6.9 && (big.s1 - small.s1) >= 0.5 && !big.s1_converged;
  return {cls_ok && s2_ok && s1_ok,
          fmt("class %s, S1 %.4f (+%.3f per decade), S2 %.8f", variation_class_name(big.cls),
              big.s1, big.s1 - small.s1, big.s2)};
}

Outcome c4_cylinders() {
  double worst_mass = 0.0;
  for (const char* name : {"example_r1", "example_r2", "gmarkov:0.7,0.3,0.4,0.6"}) {
    MarkovSystem sys = make_builtin(name);
    auto one = [](const Point&) { return 1.0; };
    for (int v = 1; v <= sys.graph().vertex_count(); ++v) {
      ExactOperatorResult mass = iterate_U_exact(sys, one, sys.representative(v), 6);
      worst_mass = std::max(worst_mass, std::fabs(mass.value - 1.0));
    }
  }
  if (worst_mass > 1e-12) return {false, fmt("depth-6 total mass off by %.2e", worst_mass)};

  // Empirical depth-3 word frequencies against exact cylinder masses.
  MarkovSystem r2 = make_builtin("example_r2");
  Point x = r2.representative(1);
  const std::size_t trials = 100'000;
  std::map<std::vector<int>, std::size_t> counts;
  for (std::size_t j = 0; j < trials; ++j) {
    Trajectory t = run(r2, x, 3, 404, j);
    ++counts[t.word];
  }
  std::vector<std::vector<int>> words;
  std::vector<int> cur;
  collect_words(r2.graph(), 1, 3, cur, words);
  double worst_pull = 0.0;  // |freq - prob| in standard errors
  for (const auto& w : words) {
    double p = cylinder_prob(r2, x, w);
    double freq = static_cast<double>(counts[w]) / static_cast<double>(trials);
    double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    worst_pull = std::max(worst_pull, std::fabs(freq - p) / se);
  }
  bool freq_ok = worst_pull <= 3.5;
  return {freq_ok, fmt("depth-6 mass dev %.2e, worst frequency pull %.2f se over %zu words",
                       worst_mass, worst_pull, words.size())};
}

Outcome c5_ratio() {
  MarkovSystem r2 = make_builtin("example_r2");
  Point x = make_euclidean({0.0, 1.0});
  Point y = make_euclidean({1.0, 2.0});
  double mx = martingale_check_exact(r2, x, y, 5);
  double my = y_martingale_check_exact(r2, x, y, 5);
  std::size_t violations = 0;
  for (std::uint64_t j = 0; j < 1000; ++j) {
    Trajectory t = run(r2, y, 30, 505, j);
    MartingalePath p = likelihood_path(r2, x, y, t.word);
    for (std::size_t k = 0; k < p.x_ratio.size(); ++k) {
      if (p.x_ratio[k] > 0.0 && std::log(p.x_ratio[k]) > p.y_part[k] + p.z_part[k] + 1e-12)
        ++violations;
    }
  }
  bool ok = mx <= 1e-10 && my <= 1e-10 && violations == 0;
  return {ok, fmt("exact discrepancies %.2e / %.2e, pointwise violations %zu of 31000 states", mx,
                  my, violations)};
}

Outcome c6_tails() {
  MarkovSystem r2 = make_builtin("example_r2");
  auto rows = tail_bound_check(r2, make_euclidean({0.0, 1.0}), make_euclidean({1.0, 2.0}), 20,
                               100'000, 5, 4);
  std::size_t flagged = 0;
  double worst_excess = -1.0;
  for (const auto& r : rows) {
    if (r.flagged) ++flagged;
    worst_excess = std::max(worst_excess, r.freq - r.bound);
  }
  return {flagged == 0,
          fmt("%zu of %zu steps flagged, worst freq-over-bound %.3e", flagged, rows.size(),
              worst_excess)};
}

Outcome c7_entropy() {
  MarkovSystem gm = make_builtin("gmarkov:0.7,0.3,0.4,0.6");
  double closed = (4.0 / 7.0) * entropy2(0.7, 0.3) + (3.0 / 7.0) * entropy2(0.4, 0.6);
  EstimateWithError lyap = estimate_entropy_lyapunov(gm, gm.representative(1), 100'000, 8, 21, 0, 4);
  EstimateWithError integ = estimate_entropy_integral(gm, gm.representative(1), 100'000, 21, 0x10000);
  bool gm_ok = std::fabs(lyap.value - closed) <= 0.01 && std::fabs(integ.value - closed) <= 0.01;

  MarkovSystem r1 = make_builtin("example_r1");
  Point origin = make_euclidean({0.0});
  double coin = entropy2(17.0 / 24.0, 7.0 / 24.0);
  EstimateWithError lyap1 = estimate_entropy_lyapunov(r1, origin, 100'000, 8, 22, 0, 4);
  EstimateWithError integ1 = estimate_entropy_integral(r1, origin, 100'000, 22, 0x10000);
  bool r1_ok = std::fabs(lyap1.value - coin) <= 0.005 &&
               std::fabs(integ1.value - coin) <= 1e-12 && integ1.std_error <= 1e-15;
  return {gm_ok && r1_ok,
          fmt("chain: %.5f / %.5f vs %.5f; fixed point: %.5f / %.12f vs %.12f", lyap.value,
              integ.value, closed, lyap1.value, integ1.value, coin)};
}

Outcome c8_ergodic() {
  MarkovSystem r2 = make_builtin("example_r2");
  EdgeStateFn f = uniform_edge_fn([](const Point& p) {
    const auto& c = std::get<EuclideanPoint>(p).coords;
    return std::min(std::fabs(c[0]) + std::fabs(c[1]), 10.0);
  });
  std::vector<Point> starts{make_euclidean({0.0, 1.0}), make_euclidean({3.0, 2.0}),
                            make_euclidean({-2.0, 5.0}), make_euclidean({0.0, -1.0}),
                            make_euclidean({1.0, -3.0})};
  std::vector<EstimateWithError> est;
  for (std::size_t s = 0; s < starts.size(); ++s)
    est.push_back(ergodic_average(r2, starts[s], f, 100'000, 909, s));
  double worst_gap = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < est.size(); ++i) {
    for (std::size_t j = i + 1; j < est.size(); ++j) {
      double gap = std::fabs(est[i].value - est[j].value);
      double tol = 3.0 * std::hypot(est[i].std_error, est[j].std_error) + 0.02;
      worst_gap = std::max(worst_gap, gap);
      ok = ok && gap <= tol;
    }
  }

  MarkovSystem r1 = make_builtin("example_r1");
  EdgeStateFn g = uniform_edge_fn([](const Point& p) {
    return std::min(std::fabs(std::get<EuclideanPoint>(p).coords[0]), 1.0);
  });
  EstimateWithError near0 = ergodic_average(r1, make_euclidean({1.0}), g, 100'000, 909, 9);
  ok = ok && near0.value <= 0.02;
  return {ok, fmt("5-start averages near %.4f, worst gap %.4f; contraction average %.4f",
                  est[0].value, worst_gap, near0.value)};
}

Outcome c9_coding() {
  MarkovSystem gm = make_builtin("gmarkov:0.7,0.3,0.4,0.6");
  CodingReport symbolic = coding_convergence(gm, 11, {5, 10, 20, 40}, 200);
  bool sym_ok = true;
  for (const auto& row : symbolic.rows) {
    double cap = std::ldexp(1.0, -static_cast<int>(row.depth));
    sym_ok = sym_ok && row.start_max == cap && row.succ_max <= cap && row.succ_max > 0.0;
  }

  MarkovSystem r2 = make_builtin("example_r2");
  CodingReport planar = coding_convergence(r2, 11, {10, 100, 1000, 5000}, 1000);
  const CodingDepthRow& deep = planar.rows.back();
  bool deep_ok = deep.start_max < 1e-6 && deep.succ_max < 1e-6;
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < planar.rows.size(); ++i)
    monotone = monotone && planar.rows[i + 1].start_median <= planar.rows[i].start_median;
  bool shallow_ok = planar.rows.front().start_median > 1e-8;
  return {sym_ok && deep_ok && monotone && shallow_ok,
          fmt("symbolic start-dep exactly 2^-depth; planar depth-5000 start-dep max %.2e, "
              "succ max %.2e",
              deep.start_max, deep.succ_max)};
}

Outcome c10_operator() {
  MarkovSystem r2 = make_builtin("example_r2");
  StateFn f = [](const Point& p) {
    const auto& c = std::get<EuclideanPoint>(p).coords;
    return std::min(std::fabs(c[0]) + std::fabs(c[1]), 10.0);
  };
  Point x = make_euclidean({0.0, 1.0});
  ExactOperatorResult it_exact = iterate_U_exact(r2, f, x, 5);
  McOperatorResult it_mc = iterate_U_mc(r2, f, x, 5, 100'000, 33, 0, 4);
  double it_gap = std::fabs(it_exact.value - it_mc.value);
  bool it_ok = it_gap <= 3.0 * it_mc.std_error + 1e-6;

  ExactOperatorResult ce_exact = cesaro_U_exact(r2, f, x, 5);
  McOperatorResult ce_mc = cesaro_U_mc(r2, f, x, 5, 100'000, 34, 0, 4);
  double ce_gap = std::fabs(ce_exact.value - ce_mc.value);
  bool ce_ok = ce_gap <= 3.0 * ce_mc.std_error + 1e-6;
  return {it_ok && ce_ok,
          fmt("iterate %.6f vs %.6f (se %.1e), cesaro %.6f vs %.6f (se %.1e)", it_exact.value,
              it_mc.value, it_mc.std_error, ce_exact.value, ce_mc.value, ce_mc.std_error)};
}

Outcome c11_moment() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"example_r1", "example_r2"}) {
    MarkovSystem sys = make_builtin(name);
    MomentBoundReport mb = moment_bound(sys);
    EmpiricalMeasure mu = empirical_measure(sys, sys.representative(1), 100'000, 10'000, 17, 0);
    double mean = measure_integral(mu, [&](const Point& p) {
      return distance(sys.metric(), p, sys.representative(sys.vertex_of_or_throw(p)));
    });
    ok = ok && mean <= mb.bound;
    if (!detail.empty()) detail += ", ";
    detail += fmt("%s mean %.4f <= %.1f", sys.name().c_str(), mean, mb.bound);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  criterion(1, "contraction rate stays below the declared bound", c1_rate);
  criterion(2, "probability axioms hold on sampled states", c2_axioms);
  criterion(3, "slow modulus family is square summable but not summable", c3_variation);
  criterion(4, "cylinder masses are additive and match simulated frequencies", c4_cylinders);
  criterion(5, "likelihood ratio reproduces target word probabilities", c5_ratio);
  criterion(6, "orbit separations obey the square root tail rate", c6_tails);
  criterion(7, "entropy estimators match the closed form", c7_entropy);
  criterion(8, "ergodic averages are start independent", c8_ergodic);
  criterion(9, "coding forgets the start exponentially in depth", c9_coding);
  criterion(10, "operator iterates agree with Monte Carlo", c10_operator);
  criterion(11, "stationary mean displacement sits under its bound", c11_moment);

  if (g_failures == 0) {
    std::printf("acceptance: all 11 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
