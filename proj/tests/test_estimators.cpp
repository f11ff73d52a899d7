#include <cmath>
#include <vector>

#include "doctest.h"

#include "cms/errors.hpp"
#include "cms/estimators.hpp"
#include "cms/system.hpp"

namespace {

using namespace cms;

// Stationary distribution of the 2-state chain (0.7 0.3; 0.4 0.6) is
// (4/7, 3/7); its entropy rate has the closed form below.
constexpr double kPi1 = 4.0 / 7.0;
double chain_entropy() {
  double h1 = -(0.7 * std::log(0.7) + 0.3 * std::log(0.3));
  double h2 = -(0.4 * std::log(0.4) + 0.6 * std::log(0.6));
  return kPi1 * h1 + (1.0 - kPi1) * h2;
}

TEST_CASE("time averages recover stationary part frequencies") {
  MarkovSystem gm = make_builtin("gmarkov:0.7,0.3,0.4,0.6");
  EdgeStateFn in_part_1 = uniform_edge_fn(
      [&gm](const Point& p) { return gm.in_vertex_set(1, p) ? 1.0 : 0.0; });
  EstimateWithError e = ergodic_average(gm, gm.representative(1), in_part_1, 50000, 7, 0);
  CHECK(e.std_error > 0.0);
  CHECK(e.std_error < 0.02);
  CHECK(std::fabs(e.value - kPi1) <= 4.0 * e.std_error + 0.002);
  CHECK(e.batches == 30);
  CHECK(e.n == 50000);
}

TEST_CASE("the one-part example concentrates its mass near the origin") {
  MarkovSystem r1 = make_builtin("example_r1");
  EdgeStateFn f = uniform_edge_fn([](const Point& p) {
    return std::min(std::fabs(std::get<EuclideanPoint>(p).coords[0]), 1.0);
  });
  EstimateWithError e = ergodic_average(r1, make_euclidean({1.0}), f, 20000, 7, 0);
  CHECK(e.value <= 0.02);
}

TEST_CASE("edge-dependent observables see the chosen edge") {
  MarkovSystem gm = make_builtin("gmarkov:0.7,0.3,0.4,0.6");
  int e11 = gm.edge_index("e1_1");
  EdgeStateFn took_e11 = [e11](int edge, const Point&) { return edge == e11 ? 1.0 : 0.0; };
  EstimateWithError e = ergodic_average(gm, gm.representative(1), took_e11, 50000, 7, 1);
  // stationary mass of the (1 -> 1) transition is pi_1 p_11 = 4/7 * 0.7 = 0.4
  CHECK(std::fabs(e.value - 0.4) <= 4.0 * e.std_error + 0.002);
}

TEST_CASE("both entropy estimators agree with the closed form") {
  MarkovSystem gm = make_builtin("gmarkov:0.7,0.3,0.4,0.6");
  double h = chain_entropy();
  EstimateWithError lya = estimate_entropy_lyapunov(gm, gm.representative(1), 20000, 6, 11);
  CHECK(std::fabs(lya.value - h) <= 0.01);
  CHECK(lya.n == 6);
  EstimateWithError itg = estimate_entropy_integral(gm, gm.representative(1), 20000, 11, 0);
  CHECK(std::fabs(itg.value - h) <= 0.01);

  // worker threads must not change a single bit
  EstimateWithError par = estimate_entropy_lyapunov(gm, gm.representative(1), 20000, 6, 11, 0, 3);
  CHECK(par.value == lya.value);
  CHECK(par.std_error == lya.std_error);
}

TEST_CASE("a fixed point turns entropy into a coin-flip rate") {
  // Both maps fix 0, so the word process is i.i.d. with p = (17/24, 7/24).
  MarkovSystem r1 = make_builtin("example_r1");
  double p = 17.0 / 24.0;
  double h = -(p * std::log(p) + (1 - p) * std::log(1 - p));
  Point x0 = make_euclidean({0.0});
  EstimateWithError lya = estimate_entropy_lyapunov(r1, x0, 5000, 6, 3);
  CHECK(std::fabs(lya.value - h) <= 0.01);
  EstimateWithError itg = estimate_entropy_integral(r1, x0, 100, 3, 0);
  CHECK(itg.value == doctest::Approx(h).epsilon(1e-12));
  CHECK(itg.std_error == 0.0);  // the integrand is constant on the orbit
}

TEST_CASE("empirical measures keep the post-burnin states") {
  MarkovSystem gm = make_builtin("gmarkov:0.7,0.3,0.4,0.6");
  EmpiricalMeasure mu = empirical_measure(gm, gm.representative(1), 1000, kDefaultBurnin, 5, 2);
  CHECK(mu.burnin == 100);
  CHECK(mu.support.size() == 900);
  CHECK_THROWS_AS(empirical_measure(gm, gm.representative(1), 100, 100, 5, 2), InvalidParams);

  double in1 = measure_integral(
      mu, [&gm](const Point& p) { return gm.in_vertex_set(1, p) ? 1.0 : 0.0; });
  CHECK(in1 > 0.3);
  CHECK(in1 < 0.8);
}

TEST_CASE("measure-averaged cylinders match the stationary word measure") {
  MarkovSystem gm = make_builtin("gmarkov:0.7,0.3,0.4,0.6");
  EmpiricalMeasure mu = empirical_measure(gm, gm.representative(1), 30000, kDefaultBurnin, 5, 0);
  std::vector<int> w{gm.edge_index("e1_1")};
  EstimateWithError e = markov_measure_cylinder(gm, mu, w);
  // M([e1_1]) = pi_1 p_11 = 0.4
  CHECK(std::fabs(e.value - 0.4) <= 4.0 * e.std_error + 0.005);
  CHECK(e.std_error < 0.01);
}

TEST_CASE("cylinder masses add exactly over one-symbol extensions") {
  MarkovSystem r2 = make_builtin("example_r2");
  EmpiricalMeasure mu =
      empirical_measure(r2, make_euclidean({0.0, 1.0}), 4000, kDefaultBurnin, 9, 0);
  // e2 keeps part 1, so continuations are the out-edges of 1: e1 and e2.
  std::vector<int> w{1};
  double direct = markov_measure_cylinder(r2, mu, w).value;
  double extended = 0.0;
  for (int e : {0, 1}) {
    std::vector<int> ext{1, e};
    extended += markov_measure_cylinder(r2, mu, ext).value;
  }
  // pointwise additivity of cylinder probabilities survives the averaging
  CHECK(direct == doctest::Approx(extended).epsilon(1e-12));
}

TEST_CASE("the stationarity table reports small discrepancies on long runs") {
  MarkovSystem gm = make_builtin("gmarkov:0.7,0.3,0.4,0.6");
  EmpiricalMeasure mu = empirical_measure(gm, gm.representative(1), 30000, kDefaultBurnin, 5, 0);
  std::vector<std::vector<int>> words{{}};
  for (int e = 0; e < 4; ++e) words.push_back({e});
  auto rows = stationarity_check(gm, mu, words);
  REQUIRE(rows.size() == 5);
  // empty word: the one-symbol cylinders partition the space pointwise
  CHECK(rows[0].measure == 1.0);
  CHECK(rows[0].discrepancy <= 1e-12);
  for (const auto& row : rows) CHECK(row.discrepancy <= 0.02);
}

}  // namespace
