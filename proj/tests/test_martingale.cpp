#include <cmath>
#include <vector>

#include "doctest.h"

#include "cms/errors.hpp"
#include "cms/martingale.hpp"
#include "cms/simulate.hpp"
#include "cms/system.hpp"

namespace {

using namespace cms;

TEST_CASE("likelihood ratios along a single symbol by hand") {
  MarkovSystem r1 = make_builtin("example_r1");
  Point x = make_euclidean({0.0});
  Point y = make_euclidean({M_PI_2});
  std::vector<int> w{0};
  MartingalePath p = likelihood_path(r1, x, y, w);
  REQUIRE(p.x_ratio.size() == 2);
  CHECK(p.x_ratio[0] == 1.0);
  // p_0(0) = 17/24, p_0(pi/2) = 21/24
  CHECK(p.px[0] == doctest::Approx(17.0 / 24.0).epsilon(1e-15));
  CHECK(p.py[0] == doctest::Approx(21.0 / 24.0).epsilon(1e-15));
  CHECK(p.x_ratio[1] == doctest::Approx(21.0 / 17.0).epsilon(1e-14));
  CHECK(p.y_part[1] == doctest::Approx(4.0 / 21.0).epsilon(1e-14));
  // (1/6)^2 / (1/8)^2 = 16/9
  CHECK(p.z_part[1] == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
  CHECK(std::log(p.x_ratio[1]) <= p.y_part[1] + p.z_part[1]);

  MarkovSystem r2 = make_builtin("example_r2");
  CHECK_THROWS_AS(
      likelihood_path(r2, make_euclidean({0.0, 1.0}), make_euclidean({0.0, -1.0}), w),
      VertexMismatch);
  std::vector<int> broken{0, 0};
  CHECK_THROWS_AS(
      likelihood_path(r2, make_euclidean({0.0, 1.0}), make_euclidean({1.0, 2.0}), broken),
      InadmissibleWord);
}

TEST_CASE("the log ratio stays under its decomposition on simulated words") {
  MarkovSystem r2 = make_builtin("example_r2");
  Point x = make_euclidean({0.0, 1.0});
  Point y = make_euclidean({1.0, 2.0});
  for (std::uint64_t s = 0; s < 100; ++s) {
    Trajectory t = run(r2, y, 30, 2024, s);
    MartingalePath p = likelihood_path(r2, x, y, t.word);
    for (std::size_t k = 0; k < p.x_ratio.size(); ++k) {
      if (p.x_ratio[k] <= 0.0) continue;
      CHECK(std::log(p.x_ratio[k]) <= p.y_part[k] + p.z_part[k] + 1e-12);
    }
  }
}

TEST_CASE("the ratio averages to the y-measure on every cylinder") {
  MarkovSystem r1 = make_builtin("example_r1");
  CHECK(martingale_check_exact(r1, make_euclidean({0.0}), make_euclidean({1.0}), 6) <= 1e-12);
  MarkovSystem r2 = make_builtin("example_r2");
  CHECK(martingale_check_exact(r2, make_euclidean({0.0, 1.0}), make_euclidean({1.0, 2.0}), 4) <=
        1e-12);
  CHECK_THROWS_AS(
      martingale_check_exact(r2, make_euclidean({0.0, 1.0}), make_euclidean({1.0, 2.0}), 30, 500),
      CapExceeded);
}

TEST_CASE("the correction term has mean-zero increments under the y-measure") {
  MarkovSystem r2 = make_builtin("example_r2");
  CHECK(y_martingale_check_exact(r2, make_euclidean({0.0, 1.0}), make_euclidean({1.0, 2.0}), 4) <=
        1e-12);
}

TEST_CASE("the second moment of the correction stays under its a-priori bound") {
  MarkovSystem r2 = make_builtin("example_r2");
  Point x = make_euclidean({0.0, 1.0});
  Point y = make_euclidean({1.0, 2.0});
  VarianceBoundReport r = variance_bound_check(r2, x, y, 10, 4000, 31, 2);
  CHECK(r.within);
  CHECK(r.bound > 0.0);
  CHECK(r.estimate >= 0.0);

  MarkovSystem bare = MarkovSystem::from_spec(parse_system(builtin_source("example_r2")));
  CHECK_THROWS_AS(variance_bound_check(bare, x, y, 5, 100, 1), MissingModulus);
}

TEST_CASE("orbit separations decay at the declared square-root rate") {
  MarkovSystem r2 = make_builtin("example_r2");
  auto rows = tail_bound_check(r2, make_euclidean({0.0, 1.0}), make_euclidean({1.0, 2.0}), 10,
                               20000, 12, 2);
  REQUIRE(rows.size() == 10);
  for (const auto& row : rows) {
    CHECK_FALSE(row.flagged);
    CHECK(row.bound == doctest::Approx(std::pow(*r2.rate(), row.i / 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("ratio exceedance frequencies fall with the threshold") {
  MarkovSystem r2 = make_builtin("example_r2");
  std::vector<double> thresholds{0.1, 1.0, 5.0};
  auto rows = uniform_integrability_table(r2, make_euclidean({0.0, 1.0}),
                                          make_euclidean({1.0, 2.0}), 20, thresholds, 3000, 8);
  REQUIRE(rows.size() == 3);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    CHECK(rows[t].sup_freq >= 0.0);
    CHECK(rows[t].sup_freq <= 1.0);
    if (t > 0) CHECK(rows[t].sup_freq <= rows[t - 1].sup_freq);
  }
}

}  // namespace
