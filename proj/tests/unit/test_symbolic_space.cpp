#include <cmath>

#include "doctest.h"
#include "solenoid/errors.hpp"
#include "solenoid/symbolic_space.hpp"
#include "support.hpp"

using namespace solenoid;
using testing::sequence;

namespace {

const ShiftConfig kHalf(Alphabet(2), 0.5);

}  // namespace

TEST_CASE("alphabet and sequence basics") {
  CHECK(Alphabet(3).tokens() == "012");
  CHECK(Alphabet(12).tokens() == "0123456789ab");
  CHECK_THROWS_AS(Alphabet(1), InvalidInput);
  CHECK_THROWS_AS(Alphabet(std::string("aa")), InvalidInput);

  const auto x = sequence("4:0101");
  CHECK(x.period() == 2);
  CHECK(x.to_string(Alphabet(2)) == "2:01");
  CHECK(x == sequence("2:01"));
  CHECK(x.at(-1) == 1);
  CHECK(x.at(-2) == 0);
  CHECK(sequence("3:000").period() == 1);
  CHECK_THROWS_AS(sequence("3:01"), InvalidInput);
  CHECK_THROWS_AS(sequence("2:02"), InvalidInput);
  CHECK_THROWS_AS(ShiftConfig(Alphabet(2), 1.0), InvalidInput);
  CHECK_THROWS_AS(ShiftConfig(Alphabet(2), 0.0), InvalidInput);
}

TEST_CASE("agreement depth examples") {
  const auto zero = sequence("1:0");
  const auto defect2 = sequence("4:0010");
  const auto parity = sequence("2:01");
  CHECK(agreement_depth(zero, defect2) == 1);
  CHECK(agreement_depth(zero, zero) == kInfiniteDepth);
  CHECK(agreement_depth(zero, parity) == 0);
  CHECK_THROWS_AS(agreement_depth(zero, PeriodicSequence::constant(0, 3)), InvalidInput);
}

TEST_CASE("d_a examples") {
  const auto zero = sequence("1:0");
  CHECK(d_a(zero, sequence("4:0010"), kHalf).value == 0.5);
  CHECK(d_a(zero, sequence("4:0010"), kHalf).exponent == 1);
  CHECK(d_a(zero, zero, kHalf).value == 0.0);
  CHECK_FALSE(d_a(zero, zero, kHalf).exponent.has_value());
  CHECK(d_a(zero, sequence("2:01"), kHalf).value == 1.0);
}

TEST_CASE("shift examples") {
  CHECK(shift(sequence("1:0"), 5) == sequence("1:0"));
  CHECK(shift(sequence("4:0010"), 1) == sequence("4:0001"));
  CHECK(shift(sequence("2:01"), 1) == sequence("2:10"));
  CHECK(shift(sequence("2:01"), 2) == sequence("2:01"));
}

TEST_CASE("ball points") {
  const auto sample = ShiftSample::all_periodic(kHalf, 4);
  const auto zero = sequence("1:0");
  CHECK(ball_points(zero, 0, sample.points()).size() == sample.size());

  // Brute-force filter on the window -1..2. That window meets every residue
  // mod 4, so only all-0 survives in a sample of period dividing 4.
  std::vector<PeriodicSequence> expected;
  for (const auto& x : sample.points()) {
    bool keep = true;
    for (std::int64_t j = -1; j <= 2; ++j) keep = keep && x.at(j) == 0;
    if (keep) expected.push_back(x);
  }
  CHECK(ball_points(zero, 2, sample.points()) == expected);
  CHECK(expected == std::vector<PeriodicSequence>{zero});

  const auto y = sequence("5:01101");
  const std::vector<PeriodicSequence> single{y};
  CHECK(ball_points(y, 50, single) == single);
}

TEST_CASE("equicontinuity witness") {
  const auto zero = sequence("1:0");
  const auto w3 = equicontinuity_witness(zero, 3, kHalf);
  CHECK(w3.k == -4);
  CHECK(w3.y.at(4) == 1);
  for (std::int64_t j = -3; j <= 3; ++j) CHECK(w3.y.at(j) == 0);
  CHECK(d_a(zero, w3.y, kHalf).value == 0.125);
  CHECK(d_a(shift(zero, w3.k), shift(w3.y, w3.k), kHalf).value == 1.0);

  const auto w1 = equicontinuity_witness(zero, 1, kHalf);
  CHECK(w1.k == -2);
  CHECK(w1.y.at(2) == 1);
  CHECK(d_a(zero, w1.y, kHalf).value == 0.5);

  testing::Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const ShiftConfig cfg(Alphabet(3), 0.4);
    const auto x = testing::random_sequence(rng, 3, 6);
    for (std::int64_t n = 1; n <= 8; ++n) {
      const auto w = equicontinuity_witness(x, n, cfg);
      CHECK(d_a(x, w.y, cfg).exponent == n);
      CHECK(d_a(shift(x, w.k), shift(w.y, w.k), cfg).exponent == 0);
    }
  }
}

TEST_CASE("sample construction") {
  const auto sample = ShiftSample::all_periodic(ShiftConfig(Alphabet(3), 1.0 / 3.0), 2);
  CHECK(sample.size() == 9);
  CHECK(sample.find(PeriodicSequence::constant(2, 3)).has_value());
  CHECK_THROWS_AS(ShiftSample(kHalf, {sequence("2:01")}), InvalidInput);
  CHECK_THROWS_AS(ShiftSample(kHalf, {sequence("1:0"), sequence("1:0")}), InvalidInput);
  CHECK(ShiftSample::all_periodic(kHalf, 10).size() == 1024);
}

TEST_CASE("property: depth agrees with direct window comparison") {
  testing::Rng rng(22);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto x = testing::random_sequence(rng, 2, 7);
    const auto y = testing::random_sequence(rng, 2, 7);
    CHECK(agreement_depth(x, y) == testing::naive_depth(x, y));
  }
}

TEST_CASE("property: depth symmetry, ultrametric bound and shift stability") {
  const auto sample = ShiftSample::all_periodic(kHalf, 5);
  const auto pts = sample.points();
  for (const auto& x : pts) {
    for (const auto& y : pts) {
      const auto nxy = agreement_depth(x, y);
      CHECK(nxy == agreement_depth(y, x));
      if (nxy != kInfiniteDepth) {
        const auto moved = agreement_depth(shift(x, 1), shift(y, 1));
        CHECK(moved >= nxy - 1);
        CHECK(moved <= nxy + 1);
        const double d = d_a(x, y, kHalf).value;
        const double dm = d_a(shift(x, 1), shift(y, 1), kHalf).value;
        CHECK(0.5 * d <= dm);
        CHECK(dm <= 2.0 * d);
      }
      for (const auto& z : pts) {
        CHECK(agreement_depth(x, z) >= std::min(nxy, agreement_depth(y, z)));
      }
    }
  }
}

TEST_CASE("property: d_a^alpha equals d_{a^alpha} at the exponent level") {
  testing::Rng rng(23);
  std::uniform_real_distribution<double> alpha(0.1, 3.0);
  std::uniform_real_distribution<double> base(0.05, 0.95);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = base(rng);
    const double al = alpha(rng);
    if (std::pow(a, al) <= 0.0 || std::pow(a, al) >= 1.0) continue;
    const ShiftConfig cfg(Alphabet(2), a);
    const ShiftConfig snow(Alphabet(2), std::pow(a, al));
    const auto x = testing::random_sequence(rng, 2, 6);
    const auto y = testing::random_sequence(rng, 2, 6);
    const auto d = d_a(x, y, cfg);
    const auto ds = d_a(x, y, snow);
    CHECK(d.exponent == ds.exponent);
    CHECK(std::pow(d.value, al) == doctest::Approx(ds.value).epsilon(1e-12));
  }
}

TEST_CASE("property: text form round-trips") {
  testing::Rng rng(24);
  const Alphabet alphabet(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = testing::random_sequence(rng, 4, 9);
    CHECK(PeriodicSequence::parse(x.to_string(alphabet), alphabet) == x);
    CHECK(shift(shift(x, 7), -7) == x);
    CHECK(shift(x, 0) == x);
  }
}
