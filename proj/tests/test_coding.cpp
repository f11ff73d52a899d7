#include <cmath>
#include <vector>

#include "doctest.h"

#include "cms/coding.hpp"
#include "cms/errors.hpp"
#include "cms/system.hpp"

namespace {

using namespace cms;

TEST_CASE("coding folds the word's maps over a start of the right part") {
  MarkovSystem r1 = make_builtin("example_r1");
  // m halvings from the representative 1 give 2^-m
  for (int m : {1, 5, 20}) {
    BackwardWord w{std::vector<int>(static_cast<std::size_t>(m), 0)};
    Point p = code_word(r1, w);
    CHECK(std::get<EuclideanPoint>(p).coords[0] == std::ldexp(1.0, -m));
  }
  BackwardWord w{{0, 0}};
  Point from_zero = code_word(r1, w, make_euclidean({0.0}));
  CHECK(std::get<EuclideanPoint>(from_zero).coords[0] == 0.0);

  CHECK(std::get<EuclideanPoint>(
            code_word(r1, BackwardWord{}, make_euclidean({3.0})))
            .coords[0] == 3.0);
  CHECK_THROWS_AS(code_word(r1, BackwardWord{}), InvalidParams);

  MarkovSystem r2 = make_builtin("example_r2");
  CHECK_THROWS_AS(code_word(r2, BackwardWord{{0, 0}}), InadmissibleWord);
  CHECK_THROWS_AS(code_word(r2, BackwardWord{{0}}, make_euclidean({0.0, -1.0})),
                  InadmissibleWord);
}

TEST_CASE("continuation energies are log probabilities above the floor") {
  MarkovSystem r1 = make_builtin("example_r1");
  BackwardWord w{std::vector<int>(20, 0)};
  double u = energy_u(r1, w, 0);
  // the coded point 2^-20 is almost the fixed point 0, where p_0 = 17/24
  CHECK(u == doctest::Approx(std::log(17.0 / 24.0)).epsilon(1e-9));
  CHECK(u >= std::log(r1.delta()));

  MarkovSystem r2 = make_builtin("example_r2");
  // e2 ends in part 1 but e3 starts from part 2
  CHECK_THROWS_AS(energy_u(r2, BackwardWord{{1}}, 2), InadmissibleWord);
}

TEST_CASE("symbol drift counts ones against zeros over suffixes") {
  CHECK(y_drift({1, 1, 1}) == std::vector<long long>{1, 2, 3});
  CHECK(y_drift({1, 0, 1}) == std::vector<long long>{1, 0, 1});
  CHECK(y_drift({0, 1}) == std::vector<long long>{1, 0});
  CHECK(y_drift({}).empty());
  CHECK_THROWS_AS(y_drift({0, 2}), WrongAlphabet);
}

TEST_CASE("symbol-space codings converge at the metric's exact rate") {
  MarkovSystem gm = make_builtin("gmarkov:0.7,0.3,0.4,0.6");
  CodingReport rep = coding_convergence(gm, 3, {3, 6}, 60);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.horizon == 12);
  CHECK(rep.words == 60);
  for (const auto& row : rep.rows) {
    double cap = std::ldexp(1.0, -static_cast<int>(row.depth));
    // a depth-m coding pins the last m symbols, nothing more
    CHECK(row.start_max == cap);
    CHECK(row.succ_max <= cap);
    CHECK(row.succ_max > 0.0);
  }
}

TEST_CASE("planar codings forget depth and start exponentially on average") {
  MarkovSystem r2 = make_builtin("example_r2");
  CodingReport rep = coding_convergence(r2, 3, {5, 200}, 30);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].depth == 5);
  CHECK(rep.rows[1].depth == 200);
  CHECK(rep.rows[1].start_median < 1e-6);
  CHECK(rep.rows[1].start_p90 < 1e-3);
  CHECK(rep.rows[1].succ_median < rep.rows[0].succ_median);
  CHECK_THROWS_AS(coding_convergence(r2, 3, {}, 10), InvalidParams);
}

TEST_CASE("regularity fit sees the exact unit exponent of symbol spaces") {
  MarkovSystem gm = make_builtin("gmarkov:0.7,0.3,0.4,0.6");
  HolderFitReport fit = holder_diagnostic(gm, 5, 64, {4, 8, 16}, 20);
  REQUIRE(fit.pairs >= 30);
  // coded distance equals word distance here, so the slope is exactly 1
  CHECK(fit.alpha == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::fabs(fit.log_c) <= 1e-9);
  CHECK(fit.coverage >= 0.9);
}

TEST_CASE("planar regularity fit produces a positive exponent") {
  MarkovSystem r2 = make_builtin("example_r2");
  HolderFitReport fit = holder_diagnostic(r2, 5, 120, {4, 8, 16, 32}, 15);
  REQUIRE(fit.pairs >= 20);
  CHECK(fit.alpha > 0.0);
  CHECK(fit.coverage >= 0.9);
}

}  // namespace
