#include <cmath>
#include <set>

#include "doctest.h"
#include "solenoid/dynamics.hpp"
#include "solenoid/errors.hpp"
#include "solenoid/examples.hpp"
#include "solenoid/metric_core.hpp"
#include "solenoid/symbolic_space.hpp"
#include "support.hpp"

using namespace solenoid;
using testing::from_rows;

namespace {

// Greedy first-fit count for the grid {i/N} under |x - y|^alpha: a center at
// index c covers c..c+m where m is the largest step with (m/N)^alpha <= eps.
std::size_t grid_cover_oracle(std::size_t n, double alpha, double eps) {
  std::size_t m = 0;
  while (m + 1 <= n && std::pow(static_cast<double>(m + 1) / static_cast<double>(n), alpha) <= eps + 1e-9) ++m;
  return (n + 1 + m) / (m + 1);
}

// On an ultrametric shift sample the d_a-balls of radius a^k partition the
// sample by the window -k+1..k, so the greedy count is the number of distinct
// window words.
std::size_t window_count_oracle(const ShiftSample& sample, std::int64_t k) {
  std::set<std::vector<Symbol>> words;
  for (const auto& x : sample.points()) {
    std::vector<Symbol> w;
    for (std::int64_t j = -k + 1; j <= k; ++j) w.push_back(x.at(j));
    words.insert(w);
  }
  return words.size();
}

}  // namespace

TEST_CASE("metric axioms on small hand-built spaces") {
  CHECK(verify_metric_axioms(from_rows({{0, 0.3}, {0.3, 0}})).is_metric);

  const auto report = verify_metric_axioms(from_rows({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}));
  CHECK_FALSE(report.is_metric);
  REQUIRE(report.axiom_violation_count == 1);
  const auto& v = report.axiom_violations.front();
  CHECK(v.kind == ViolationKind::kTriangle);
  CHECK(v.triple.x == 0);
  CHECK(v.triple.z == 2);
  CHECK(v.triple.via == 1);
  CHECK(v.slack == 1.0);
  CHECK(report.diameter == 3.0);
}

TEST_CASE("asymmetric and degenerate tables are reported") {
  const auto asym = verify_metric_axioms(from_rows({{0, 1}, {2, 0}}));
  CHECK_FALSE(asym.is_metric);
  CHECK(asym.axiom_violations.front().kind == ViolationKind::kSymmetry);

  const auto ident = verify_metric_axioms(from_rows({{0, 0}, {0, 0}}));
  CHECK_FALSE(ident.is_metric);
  CHECK(ident.axiom_violations.front().kind == ViolationKind::kIdentity);
}

TEST_CASE("period-4 binary sample is an ultrametric space") {
  const auto sample = ShiftSample::all_periodic(ShiftConfig(Alphabet(2), 0.5), 4);
  REQUIRE(sample.size() == 16);
  const auto report = verify_ultrametric(sample.metric_space(), 0.0);
  CHECK(report.is_metric);
  CHECK(report.is_ultrametric);
  CHECK(report.diameter == 1.0);
}

TEST_CASE("ultrametric examples") {
  const ShiftConfig cfg(Alphabet(2), 0.5);
  const std::vector<PeriodicSequence> pts{testing::sequence("1:0"), testing::sequence("4:0010"),
                                          testing::sequence("2:01")};
  const auto space = FiniteMetricSpace::from_function(testing::index_labels(3), [&](PointId i, PointId j) {
    return d_a(pts[i], pts[j], cfg).value;
  });
  CHECK(space.dist(0, 2) == 1.0);
  CHECK(space.dist(0, 1) == 0.5);
  CHECK(space.dist(1, 2) == 1.0);
  CHECK(verify_ultrametric(space).is_ultrametric);

  const auto line = verify_ultrametric(testing::line(3));
  CHECK_FALSE(line.is_ultrametric);
  CHECK(line.is_metric);
  const auto& v = line.ultrametric_violations.front();
  CHECK(v.triple.x == 0);
  CHECK(v.triple.z == 2);
  CHECK(v.triple.via == 1);
  CHECK(v.slack == 1.0);

  CHECK(verify_ultrametric(testing::line(1)).is_ultrametric);
}

TEST_CASE("verification preconditions") {
  CHECK_THROWS_AS(verify_metric_axioms(FiniteMetricSpace({}, {})), InvalidInput);
  CHECK_THROWS_AS(verify_ultrametric(FiniteMetricSpace({}, {})), InvalidInput);
  CHECK_THROWS_AS(verify_metric_axioms(testing::line(2), -1.0), InvalidInput);
  CHECK_THROWS_AS(FiniteMetricSpace({"a", "b"}, {0, 1, 1}), InvalidInput);
  CHECK_THROWS_AS(FiniteMetricSpace({"a", "b"}, {0, -1, -1, 0}), InvalidInput);
}

TEST_CASE("snowflake transform") {
  CHECK(snowflake(from_rows({{0, 0.25}, {0.25, 0}}), 0.5).dist(0, 1) == 0.5);
  CHECK_THROWS_AS(snowflake(testing::line(2), 0.0), InvalidInput);
  CHECK_THROWS_AS(snowflake(testing::line(2), -1.0), InvalidInput);

  SUBCASE("d_{1/2} squared is d_{1/4}") {
    const auto half = ShiftSample::all_periodic(ShiftConfig(Alphabet(2), 0.5), 6).metric_space();
    const auto quarter = ShiftSample::all_periodic(ShiftConfig(Alphabet(2), 0.25), 6).metric_space();
    const auto squared = snowflake(half, 2.0);
    REQUIRE(squared.size() == quarter.size());
    for (PointId x = 0; x < squared.size(); ++x) {
      for (PointId y = 0; y < squared.size(); ++y) {
        CHECK(squared.dist(x, y) == quarter.dist(x, y));
        CHECK(squared.exponent(x, y) == quarter.exponent(x, y));
      }
    }
  }

  SUBCASE("square root of the 1/16 grid stays a metric") {
    const auto grid = build_snowflake_interval(16, 1.0);
    CHECK(verify_metric_axioms(snowflake(grid, 0.5)).is_metric);
  }
}

TEST_CASE("truncation") {
  CHECK(truncate(from_rows({{0, 2}, {2, 0}}), 0.5).dist(0, 1) == 0.5);
  CHECK(truncate(from_rows({{0, 0.3}, {0.3, 0}}), 0.5).dist(0, 1) == 0.3);
  CHECK(truncate(build_padic_cycle(2, 3).space, 0.25).diameter() == 0.25);
  CHECK_THROWS_AS(truncate(testing::line(2), 0.0), InvalidInput);
}

TEST_CASE("box counting on the full shift") {
  const auto sample = ShiftSample::all_periodic(ShiftConfig(Alphabet(2), 0.5), 6);
  REQUIRE(sample.size() == 64);
  const std::vector<double> scales{0.5, 0.25, 0.125};
  const auto fit = box_counting_dimension(sample.metric_space(), scales);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    CHECK(fit.counts[i] == window_count_oracle(sample, static_cast<std::int64_t>(i) + 1));
  }
  CHECK(fit.counts == std::vector<std::size_t>{4, 16, 64});
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("box counting edge cases") {
  const auto fit = box_counting_dimension(testing::line(1), std::vector<double>{0.5, 0.25, 0.125});
  CHECK(fit.counts == std::vector<std::size_t>{1, 1, 1});
  CHECK(fit.slope == 0.0);

  const auto line = testing::line(4);
  CHECK_THROWS_AS(box_counting_dimension(line, std::vector<double>{1.0, 0.5}), InvalidInput);
  CHECK_THROWS_AS(box_counting_dimension(line, std::vector<double>{1.0, 1.0, 0.5}), InvalidInput);
  CHECK_THROWS_AS(box_counting_dimension(line, std::vector<double>{4.0, 1.0, 0.5}), InvalidInput);
  CHECK_THROWS_AS(box_counting_dimension(line, std::vector<double>{1.0, 0.5, -0.5}), InvalidInput);
}

TEST_CASE("box counting on snowflaked grids matches the closed-form greedy count") {
  struct Case {
    std::size_t n;
    double alpha;
    std::vector<double> scales;
    std::vector<std::size_t> frozen;
  };
  const std::vector<Case> cases{
      {256, 0.5, {0.5, 0.25, 0.125, 0.0625}, {4, 16, 52, 129}},
      {256, 0.5, {0.5, std::pow(2.0, -1.5), 0.25, std::pow(2.0, -2.5)}, {4, 8, 16, 29}},
      {16, 1.0, {0.5, 0.25, 0.125}, {2, 4, 6}},
  };
  for (const auto& c : cases) {
    const auto fit = box_counting_dimension(build_snowflake_interval(c.n, c.alpha), c.scales);
    for (std::size_t i = 0; i < c.scales.size(); ++i) {
      CHECK(fit.counts[i] == grid_cover_oracle(c.n, c.alpha, c.scales[i]));
    }
    CHECK(fit.counts == c.frozen);
  }
}

TEST_CASE("sup distance between self-maps") {
  const auto z4 = build_padic_cycle(2, 2).space;
  const auto id = SelfMap::identity(4);
  CHECK(sup_distance(id, id, z4) == 0.0);
  CHECK(sup_distance(SelfMap::translation(4, 1), id, z4) == 1.0);
  CHECK(sup_distance(SelfMap::translation(4, 2), id, z4) == 0.5);
  CHECK_THROWS_AS(sup_distance(SelfMap::identity(3), id, z4), InvalidInput);
}

TEST_CASE("least squares") {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const auto fit = least_squares(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("triangle defect ratio of squared distances") {
  CHECK(triangle_defect_ratio(testing::line(3)) == doctest::Approx(1.0));
  CHECK(triangle_defect_ratio(snowflake(testing::line(3), 2.0)) == doctest::Approx(2.0));
}

TEST_CASE("property: snowflake with alpha in (0, 1] keeps the triangle inequality") {
  testing::Rng rng(11);
  std::uniform_real_distribution<double> alpha(0.05, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const auto space = testing::random_graph_metric(9, rng);
    REQUIRE(verify_metric_axioms(space, 0.0).is_metric);
    const double a = trial == 0 ? 1.0 : alpha(rng);
    CHECK_MESSAGE(verify_metric_axioms(snowflake(space, a), 0.0).is_metric, "alpha = " << a);
  }
}

TEST_CASE("property: snowflakes of ultrametrics are ultrametrics") {
  testing::Rng rng(12);
  std::uniform_real_distribution<double> alpha(0.05, 4.0);
  for (int trial = 0; trial < 60; ++trial) {
    const auto space = testing::random_ultrametric(10, rng);
    REQUIRE(verify_ultrametric(space, 0.0).is_ultrametric);
    CHECK(verify_ultrametric(snowflake(space, alpha(rng)), 0.0).is_ultrametric);
  }
}

TEST_CASE("property: truncation is idempotent and monotone") {
  testing::Rng rng(13);
  std::uniform_real_distribution<double> level(0.5, 12.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto space = testing::random_graph_metric(8, rng);
    const double k = level(rng);
    const auto once = truncate(space, k);
    const auto twice = truncate(once, k);
    CHECK(verify_metric_axioms(once, 0.0).is_metric);
    for (PointId x = 0; x < space.size(); ++x) {
      for (PointId y = 0; y < space.size(); ++y) {
        CHECK(once.dist(x, y) <= space.dist(x, y));
        CHECK(twice.dist(x, y) == once.dist(x, y));
      }
    }
  }
}

TEST_CASE("property: snowflaking divides the box-counting slope by alpha") {
  const auto space = ShiftSample::all_periodic(ShiftConfig(Alphabet(2), 0.5), 6).metric_space();
  const std::vector<double> scales{0.5, 0.25, 0.125};
  const double base_slope = box_counting_dimension(space, scales).slope;
  for (double alpha : {0.25, 0.5, 0.8, 1.5}) {
    std::vector<double> moved;
    for (double s : scales) moved.push_back(std::pow(s, alpha));
    const auto fit = box_counting_dimension(snowflake(space, alpha), moved);
    CHECK(fit.slope == doctest::Approx(base_slope / alpha).epsilon(1e-9));
  }
}

TEST_CASE("property: sup distance obeys the triangle inequality") {
  testing::Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const auto space = testing::random_graph_metric(7, rng);
    const auto f = testing::random_permutation(7, rng);
    const auto g = testing::random_permutation(7, rng);
    const auto h = testing::random_permutation(7, rng);
    CHECK(sup_distance(f, h, space) <= sup_distance(f, g, space) + sup_distance(g, h, space));
    CHECK(sup_distance(f, g, space) == sup_distance(g, f, space));
  }
}
