#include <cmath>

#include "doctest.h"

#include "cms/analysis.hpp"
#include "cms/errors.hpp"
#include "cms/sysdsl.hpp"
#include "cms/system.hpp"

namespace {

using namespace cms;

TEST_CASE("one-step contraction ratio of the one-part example") {
  MarkovSystem sys = make_builtin("example_r1");
  // Linear maps: the ratio at (0, h) is p_0(0)/2 + 2 p_1(0) = 45/48 for any h.
  for (double h : {0.5, 0.01, 3.0}) {
    double r = contraction_ratio(sys, make_euclidean({0.0}), make_euclidean({h}));
    CHECK(r == doctest::Approx(45.0 / 48.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(contraction_ratio(sys, make_euclidean({1.0}), make_euclidean({1.0})),
                  InvalidParams);
  MarkovSystem r2 = make_builtin("example_r2");
  CHECK_THROWS_AS(
      contraction_ratio(r2, make_euclidean({0.0, 1.0}), make_euclidean({0.0, -1.0})),
      VertexMismatch);
}

TEST_CASE("rate search finds the deterministic maximum and stays under the declared rate") {
  MarkovSystem sys = make_builtin("example_r1");
  RateReport r = estimate_contraction_rate(sys, 5000, 17);
  CHECK(std::fabs(r.deterministic_max - 0.9375) <= 1e-12);
  CHECK(r.max_ratio <= 0.9375 + 1e-9);
  CHECK(r.max_ratio >= 0.93);
  CHECK(r.pairs <= r.budget);
  CHECK(r.argmax_vertex == 1);

  // growing the budget with the same seed can only raise the maximum
  RateReport small = estimate_contraction_rate(sys, 2000, 17);
  CHECK(r.max_ratio >= small.max_ratio);
}

TEST_CASE("appending a symbol halves sequence distances, so the ratio is exactly one half") {
  MarkovSystem gm = make_builtin("gmarkov:0.7,0.3,0.4,0.6");
  RateReport r = estimate_contraction_rate(gm, 300, 3);
  CHECK(r.max_ratio == 0.5);
  CHECK(r.deterministic_max == 0.5);
}

TEST_CASE("registered envelopes give exact profiles, absent ones throw") {
  MarkovSystem sys = make_builtin("example_r1");
  ModulusProfile prof = envelope_profile(sys, 1.0, 0.5, 20);
  CHECK(prof.mode == ModulusProfile::Mode::ExactClosedForm);
  REQUIRE(prof.size() == 20);
  CHECK(prof.phi[0] == doctest::Approx(0.5 / 3.0).epsilon(1e-15));
  CHECK(prof.phi[4] == doctest::Approx(std::pow(0.5, 5) / 3.0).epsilon(1e-15));
  CHECK(prof.scale(3) == 0.125);

  MarkovSystem bare = MarkovSystem::from_spec(parse_system(builtin_source("example_r1")));
  CHECK_THROWS_AS(envelope_profile(bare, 1.0, 0.5, 5), MissingModulus);
}

TEST_CASE("sampled profiles stay under the envelope and above zero") {
  MarkovSystem sys = make_builtin("example_r1");
  auto fn = [&sys](const Point& p) { return sys.edge_prob(0, p); };
  ModulusProfile prof = modulus_profile(fn, 1, sys, 1.0, 0.5, 8, 400, 11);
  CHECK(prof.mode == ModulusProfile::Mode::SampledLowerBound);
  CHECK(prof.phi[0] > 0.01);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    CHECK(prof.phi[i] <= prof.scale(i + 1) / 3.0 + 1e-12);
    if (i > 0) CHECK(prof.phi[i - 1] >= prof.phi[i]);  // monotone in the scale
  }
}

TEST_CASE("slowly varying modulus values") {
  CHECK(jo_modulus(0.5, 0.2, 1) == 0.5);
  CHECK(jo_modulus(0.5, 0.2, 10) == 0.05);
  CHECK_THROWS_AS(jo_modulus(0.0, 0.2, 1), InvalidParams);
  CHECK_THROWS_AS(jo_modulus(0.9, 0.2, 1), InvalidParams);
  CHECK_THROWS_AS(jo_modulus(0.5, 0.2, 0), InvalidParams);

  ModulusProfile prof = jo_profile(0.5, 100);
  CHECK(prof.c == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(prof.phi[9] == 0.05);
  CHECK(prof.mode == ModulusProfile::Mode::ExactClosedForm);
}

TEST_CASE("summability classes separate the bundled moduli") {
  // geometric decay: both sums converge
  MarkovSystem r1 = make_builtin("example_r1");
  VariationReport dini = variation_class(envelope_profile(r1, 1.0, 0.5, 2000), 2000);
  CHECK(dini.cls == VariationClass::Dini);
  CHECK(dini.s1_converged);

  // alpha/n: squares converge, the plain sum keeps growing
  VariationReport jo = variation_class(jo_profile(0.5, 100000), 100000);
  CHECK(jo.cls == VariationClass::SquareSummableNotDini);
  CHECK_FALSE(jo.s1_converged);
  CHECK(jo.s2_converged);
  // frozen reference for the deterministic partial sum of squares
  CHECK(jo.s2 == doctest::Approx(0.4112310167245566).epsilon(1e-12));
  CHECK(jo.s1 >= 6.0);

  // a constant positive modulus diverges in both senses
  ModulusProfile flat;
  flat.mode = ModulusProfile::Mode::ExactClosedForm;
  flat.phi.assign(10000, 0.1);
  CHECK(variation_class(flat, 10000).cls == VariationClass::NeitherDetected);

  // an all-zero profile is trivially summable
  ModulusProfile zero;
  zero.mode = ModulusProfile::Mode::SampledLowerBound;
  zero.phi.assign(1000, 0.0);
  CHECK(variation_class(zero, 1000).cls == VariationClass::Dini);

  // a sampled profile cannot certify divergence
  ModulusProfile sampled;
  sampled.mode = ModulusProfile::Mode::SampledLowerBound;
  sampled.phi.assign(10000, 0.0);
  for (std::size_t i = 0; i < sampled.phi.size(); ++i)
    sampled.phi[i] = 0.5 / static_cast<double>(i + 1);
  CHECK(variation_class(sampled, 10000).cls == VariationClass::Inconclusive);
}

TEST_CASE("displacement bound from representatives and the declared rate") {
  MomentBoundReport r1 = moment_bound(make_builtin("example_r1"));
  CHECK(r1.c_max == 1.0);  // the doubling map moves the representative from 1 to 2
  CHECK(r1.bound == doctest::Approx(16.0).epsilon(1e-12));

  MomentBoundReport gm = moment_bound(make_builtin("gmarkov:0.7,0.3,0.4,0.6"));
  CHECK(gm.c_max == 1.0);  // off-part edges change the most recent symbol
  CHECK(gm.bound == doctest::Approx(2.0).epsilon(1e-12));

  MarkovSystem norate = MarkovSystem::from_spec(parse_system(
      "system s\ndim 1\nmetric l1\nvertices 1\nrepresentative 1 = (0)\n"
      "edge a : 1 -> 1 map (0.5 * x) prob 1\ndelta 1\n"));
  CHECK_THROWS_AS(moment_bound(norate), MissingRate);
}

}  // namespace
