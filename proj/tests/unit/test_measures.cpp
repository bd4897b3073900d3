#include <cmath>

#include "doctest.h"
#include "solenoid/errors.hpp"
#include "solenoid/examples.hpp"
#include "solenoid/measures.hpp"
#include "support.hpp"

using namespace solenoid;
using testing::sequence;

namespace {

const ShiftConfig kHalf(Alphabet(2), 0.5);

CylinderSet random_cylinder(testing::Rng& rng, std::size_t alphabet) {
  std::uniform_int_distribution<std::int64_t> index(-30, 30);
  std::uniform_int_distribution<int> symbol(0, static_cast<int>(alphabet) - 1);
  std::uniform_int_distribution<int> count(0, 10);
  std::map<std::int64_t, Symbol> c;
  for (int k = count(rng); k > 0; --k) c[index(rng)] = static_cast<Symbol>(symbol(rng));
  return CylinderSet(c);
}

WeightVector random_weights(testing::Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) sum += (x = u(rng));
  for (auto& x : w) x /= sum;
  // push any rounding residue into the last entry
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) head += w[i];
  w.back() = 1.0 - head;
  return WeightVector(w);
}

// Smallest n >= 0 with a^n <= r, by repeated multiplication.
std::int64_t depth_oracle(double r, double a) {
  std::int64_t n = 0;
  double power = 1.0;
  while (power > r * (1.0 + 1e-12)) {
    power *= a;
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("weight vectors") {
  CHECK(WeightVector::uniform(4).is_uniform());
  CHECK_THROWS_AS(WeightVector({0.5, 0.6}), InvalidInput);
  CHECK_THROWS_AS(WeightVector({1.5, -0.5}), InvalidInput);
  CHECK_THROWS_AS(WeightVector({1.0}), InvalidInput);
  CHECK_FALSE(WeightVector({1.0, 0.0}).strictly_positive());
}

TEST_CASE("cylinder measure examples") {
  const auto ball = CylinderSet::ball(sequence("1:0"), 2);
  CHECK(ball.constraints().size() == 4);
  CHECK(ball.constraints().begin()->first == -1);
  CHECK(ball.constraints().rbegin()->first == 2);
  CHECK(cylinder_measure(ball, WeightVector::uniform(2)) == 1.0 / 16.0);
  CHECK(cylinder_measure(ball, WeightVector({0.75, 0.25})) == 0.31640625);
  CHECK(cylinder_measure(CylinderSet(), WeightVector({0.75, 0.25})) == 1.0);
  CHECK_THROWS_AS(cylinder_measure(CylinderSet(std::map<std::int64_t, Symbol>{{0, 2}}), WeightVector::uniform(2)), InvalidInput);
}

TEST_CASE("shift invariance examples") {
  const CylinderSet one(std::map<std::int64_t, Symbol>{{0, 1}});
  const WeightVector w({0.75, 0.25});
  CHECK(cylinder_measure(one, w) == 0.25);
  CHECK(cylinder_measure(one.shifted(1), w) == 0.25);
  const std::vector<CylinderSet> single{one};
  CHECK(shift_invariance_check(w, single) == 0.0);

  testing::Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CylinderSet> cylinders;
    for (int c = 0; c < 100; ++c) cylinders.push_back(random_cylinder(rng, 3));
    CHECK(shift_invariance_check(WeightVector::uniform(3), cylinders) == 0.0);
    CHECK(shift_invariance_check(random_weights(rng, 3), cylinders) == 0.0);
  }
}

TEST_CASE("ball depth") {
  for (std::int64_t n = 0; n <= 20; ++n) {
    CHECK(ball_depth(std::pow(0.5, static_cast<double>(n)), 0.5) == n);
    CHECK(ball_depth(std::pow(1.0 / 3.0, static_cast<double>(n)), 1.0 / 3.0) == n);
  }
  CHECK(ball_depth(0.3, 0.5) == 2);
  CHECK(ball_depth(5.0, 0.5) == 0);
  testing::Rng rng(62);
  std::uniform_real_distribution<double> radius(1e-4, 1.5), base(0.1, 0.9);
  for (int trial = 0; trial < 2000; ++trial) {
    const double r = radius(rng), a = base(rng);
    CHECK(ball_depth(r, a) == depth_oracle(r, a));
  }
}

TEST_CASE("torus ball measure examples") {
  const auto sample = ShiftSample::all_periodic(kHalf, 4);
  const auto w = WeightVector::uniform(2);
  const TorusPoint p{*sample.find(sequence("1:0")), 0.4};
  CHECK(torus_ball_measure(p, 0.25, sample, w) == 1.0 / 32.0);
  CHECK(torus_ball_measure(p, 0.5, sample, w) == 0.25);
  for (double r : {0.5, 0.25, 0.125}) {
    const double ratio = torus_ball_measure(p, r, sample, w) / (r * r * r);
    CHECK(ratio >= 1.0);
    CHECK(ratio <= 4.0);
    CHECK(ratio == 2.0);
  }
  CHECK_THROWS_AS(torus_ball_measure(p, 0.75, sample, w), OutOfRegime);
  CHECK_THROWS_AS(torus_ball_measure(p, 0.0, sample, w), InvalidInput);
}

TEST_CASE("Ahlfors reports") {
  const auto sample = ShiftSample::all_periodic(kHalf, 6);
  const auto uniform = WeightVector::uniform(2);
  const double dim = uniform_shift_dimension(kHalf);
  CHECK(dim == 2.0);

  std::vector<double> dyadic;
  for (int n = 0; n <= 6; ++n) dyadic.push_back(std::ldexp(1.0, -n));
  const auto base = ahlfors_check_base(sample.points(), dyadic, dim, kHalf, uniform);
  CHECK(base.c_low == 1.0);
  CHECK(base.c_high == 1.0);
  CHECK(base.fitted_exponent == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(base.spread_grows);

  std::vector<TorusPoint> centers;
  testing::Rng rng(63);
  std::uniform_real_distribution<double> time(0.0, 1.0);
  for (PointId x = 0; x < sample.size(); ++x) centers.push_back({x, time(rng)});
  const std::vector<double> radii{0.5, 0.25, 0.125, 0.0625, 0.03125};
  const auto torus = ahlfors_check(centers, radii, dim + 1.0, sample, uniform);
  CHECK(torus.c_low >= 0.5);
  CHECK(torus.c_high <= 4.0);
  CHECK(std::abs(torus.fitted_exponent - 3.0) <= 0.1);
  CHECK_THROWS_AS(ahlfors_check(centers, std::vector<double>{0.75}, 3.0, sample, uniform), OutOfRegime);
  CHECK_THROWS_AS(ahlfors_check_base({}, dyadic, dim, kHalf, uniform), InvalidInput);

  const auto skewed = ahlfors_check_base(sample.points(), dyadic, dim, kHalf, WeightVector({0.75, 0.25}));
  CHECK(skewed.spread_grows);
  CHECK(skewed.c_high / skewed.c_low >= std::pow(3.0, 6.0));
}

TEST_CASE("doubling examples") {
  const auto sample = ShiftSample::all_periodic(kHalf, 6);
  std::vector<double> radii;
  for (int n = 1; n <= 6; ++n) radii.push_back(std::ldexp(1.0, -n));
  CHECK(doubling_check_base(sample.points(), radii, kHalf, WeightVector::uniform(2)) == 4.0);

  const double skewed = doubling_check_base(sample.points(), radii, kHalf, WeightVector({0.75, 0.25}));
  CHECK(skewed <= 16.0);
  CHECK(skewed > 4.0);

  const std::vector<PeriodicSequence> one{sequence("1:0")};
  CHECK(doubling_check_base(one, std::vector<double>{1.0}, kHalf, WeightVector::uniform(2)) == 1.0);
  CHECK_THROWS_AS(doubling_check_base(one, radii, kHalf, WeightVector({1.0, 0.0})), InvalidInput);

  const std::vector<TorusPoint> centers{{0, 0.2}, {5, 0.9}};
  CHECK(doubling_check(centers, std::vector<double>{0.125}, sample, WeightVector::uniform(2)) == 8.0);
  CHECK_THROWS_AS(doubling_check(centers, std::vector<double>{0.5}, sample, WeightVector::uniform(2)), OutOfRegime);
}

TEST_CASE("property: cylinder measure is multiplicative and monotone") {
  testing::Rng rng(64);
  for (int trial = 0; trial < 500; ++trial) {
    const auto w = random_weights(rng, 3);
    const auto a = random_cylinder(rng, 3);
    auto b_constraints = random_cylinder(rng, 3).constraints();
    std::map<std::int64_t, Symbol> disjoint;
    for (auto [j, s] : b_constraints) disjoint[j + 100] = s;
    std::map<std::int64_t, Symbol> joined = a.constraints();
    joined.insert(disjoint.begin(), disjoint.end());
    CHECK(cylinder_measure(CylinderSet(joined), w) ==
          doctest::Approx(cylinder_measure(a, w) * cylinder_measure(CylinderSet(disjoint), w)).epsilon(1e-14));
    CHECK(cylinder_measure(CylinderSet(joined), w) <= cylinder_measure(a, w));
  }
}

TEST_CASE("property: uniform ball measure is (#B)^(-2n)") {
  for (std::size_t b : {2, 3}) {
    const ShiftConfig cfg(Alphabet(b), 1.0 / static_cast<double>(b));
    const auto sample = ShiftSample::all_periodic(cfg, 4);
    const auto w = WeightVector::uniform(b);
    for (std::int64_t n = 0; n <= 6; ++n) {
      const double r = std::pow(cfg.a(), static_cast<double>(n));
      for (const auto& x : sample.points()) {
        const double expected = std::pow(static_cast<double>(b), -2.0 * static_cast<double>(n));
        // 1/2 is exact in binary, 1/3 is not
        if (b == 2) CHECK(base_ball_measure(x, r, cfg, w) == expected);
        else CHECK(base_ball_measure(x, r, cfg, w) == doctest::Approx(expected).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("property: uniform torus ball measure is flow invariant") {
  const auto sample = ShiftSample::all_periodic(kHalf, 5);
  const auto model = build_full_shift(2, 0.5, 5);
  const auto w = WeightVector::uniform(2);
  testing::Rng rng(65);
  std::uniform_int_distribution<PointId> base(0, sample.size() - 1);
  std::uniform_real_distribution<double> time(0.0, 1.0), shift(-3.0, 3.0), radius(0.01, 0.5);
  for (int trial = 0; trial < 1000; ++trial) {
    const TorusPoint p{base(rng), time(rng)};
    const double r = radius(rng);
    CHECK(torus_ball_measure(flow(p, shift(rng), model.torus), r, sample, w) == torus_ball_measure(p, r, sample, w));
  }
}
