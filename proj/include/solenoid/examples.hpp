#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "solenoid/dynamics.hpp"
#include "solenoid/mapping_torus.hpp"
#include "solenoid/metric_core.hpp"
#include "solenoid/symbolic_space.hpp"

namespace solenoid {

struct FullShiftParams {
  std::size_t alphabet_size = 2;
  double a = 0.5;
  std::size_t max_period = 4;
};

struct TwoFixedPointsParams {};

struct PadicCycleParams {
  std::uint64_t p = 2;
  std::uint32_t m = 3;
};

struct SnowflakeIntervalParams {
  std::size_t n = 16;
  double alpha = 1.0;
};

/// An explicit distance table and permutation, for small hand-built systems.
struct CustomParams {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> distances;
  std::vector<PointId> permutation;  // empty means identity
};

using ExampleSpec =
    std::variant<FullShiftParams, TwoFixedPointsParams, PadicCycleParams, SnowflakeIntervalParams, CustomParams>;

/// "full-shift", "two-fixed-points", "padic-cycle", "snowflake-interval", "custom".
std::string kind_name(const ExampleSpec& spec);

/// A base space with its homeomorphism and mapping torus.
struct ExampleModel {
  std::string kind;
  FiniteMetricSpace space;
  SelfMap phi;
  TorusSpace torus;
  std::optional<ShiftSample> shift;  // present for shift-space models
  double expected_C = 1.0;           // bilipschitz constant the construction guarantees
};

/// All periodic points of period dividing max_period with d_a; phi is the
/// shift, C = 1/a and k = 1.
ExampleModel build_full_shift(std::size_t alphabet_size, double a, std::size_t max_period);

/// Z/p^m with the p-adic metric p^{-v(x - y)} and phi = (+1), an isometry.
ExampleModel build_padic_cycle(std::uint64_t p, std::uint32_t m);

/// {all-0, all-1} at distance 1, both fixed by the shift: two disjoint circles.
ExampleModel build_two_fixed_points();

/// Grid {i/N : 0 <= i <= N} with |x - y|^alpha.
FiniteMetricSpace build_snowflake_interval(std::size_t n, double alpha);

ExampleModel build_custom(const CustomParams& params);

/// Dispatches on the spec; the snowflake interval is paired with the identity map.
ExampleModel build_model(const ExampleSpec& spec);

bool is_prime(std::uint64_t n);

/// p-adic valuation of x in Z/p^m (m for x = 0).
std::uint32_t padic_valuation(std::uint64_t x, std::uint64_t p, std::uint32_t m);

}  // namespace solenoid
