#include "solenoid/examples.hpp"

#include <cmath>
#include <limits>

#include "solenoid/errors.hpp"

namespace solenoid {

std::string kind_name(const ExampleSpec& spec) {
  struct Namer {
    std::string operator()(const FullShiftParams&) const { return "full-shift"; }
    std::string operator()(const TwoFixedPointsParams&) const { return "two-fixed-points"; }
    std::string operator()(const PadicCycleParams&) const { return "padic-cycle"; }
    std::string operator()(const SnowflakeIntervalParams&) const { return "snowflake-interval"; }
    std::string operator()(const CustomParams&) const { return "custom"; }
  };
  return std::visit(Namer{}, spec);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint32_t padic_valuation(std::uint64_t x, std::uint64_t p, std::uint32_t m) {
  std::uint32_t v = 0;
  while (v < m && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

ExampleModel build_full_shift(std::size_t alphabet_size, double a, std::size_t max_period) {
  if (alphabet_size < 2) throw InvalidInput("full shift needs an alphabet of size >= 2");
  if (max_period < 1) throw InvalidInput("max_period must be at least 1");
  ShiftSample sample = ShiftSample::all_periodic(ShiftConfig(Alphabet(alphabet_size), a), max_period);
  FiniteMetricSpace space = sample.metric_space();
  SelfMap phi = sample.shift_map();
  TorusSpace torus(space, phi, 1.0);
  return {"full-shift", std::move(space), std::move(phi), std::move(torus), std::move(sample), 1.0 / a};
}

ExampleModel build_padic_cycle(std::uint64_t p, std::uint32_t m) {
  if (!is_prime(p)) throw InvalidInput("p must be prime");
  if (m < 1) throw InvalidInput("m must be at least 1");
  const double size_d = std::pow(static_cast<double>(p), static_cast<double>(m));
  if (size_d > 4096) throw InvalidInput("p^m must not exceed 4096");
  const auto size = static_cast<std::uint64_t>(size_d);

  std::vector<std::string> labels;
  for (std::uint64_t x = 0; x < size; ++x) labels.push_back(std::to_string(x));
  const double base = 1.0 / static_cast<double>(p);
  ExactPowers exact{base, std::vector<std::int64_t>(size * size, kInfiniteExponent)};
  std::vector<double> table(size * size, 0.0);
  for (std::uint64_t x = 0; x < size; ++x) {
    for (std::uint64_t y = 0; y < size; ++y) {
      if (x == y) continue;
      const std::uint32_t v = padic_valuation((x + size - y) % size, p, m);
      table[x * size + y] = std::pow(base, static_cast<double>(v));
      exact.exponents[x * size + y] = v;
    }
  }
  FiniteMetricSpace space(std::move(labels), std::move(table),
                          "Z/" + std::to_string(p) + "^" + std::to_string(m), std::move(exact));
  SelfMap phi = SelfMap::translation(size, 1);
  TorusSpace torus(space, phi, 1.0);
  return {"padic-cycle", std::move(space), std::move(phi), std::move(torus), std::nullopt, 1.0};
}

ExampleModel build_two_fixed_points() {
  const ShiftConfig cfg(Alphabet(2), 0.5);
  ShiftSample sample(cfg, {PeriodicSequence::constant(0, 2), PeriodicSequence::constant(1, 2)});
  FiniteMetricSpace space = sample.metric_space();
  SelfMap phi = sample.shift_map();
  TorusSpace torus(space, phi, 1.0);
  return {"two-fixed-points", std::move(space), std::move(phi), std::move(torus), std::move(sample), 1.0};
}

FiniteMetricSpace build_snowflake_interval(std::size_t n, double alpha) {
  if (n < 2) throw InvalidInput("snowflake interval needs N >= 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("snowflake exponent must lie in (0, 1]");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i <= n; ++i) labels.push_back(std::to_string(i) + "/" + std::to_string(n));
  const auto grid = static_cast<double>(n);
  return FiniteMetricSpace::from_function(
      std::move(labels),
      [&](PointId i, PointId j) {
        const double gap = std::abs(static_cast<double>(i) - static_cast<double>(j)) / grid;
        return gap == 0.0 ? 0.0 : std::pow(gap, alpha);
      },
      "interval(" + std::to_string(n) + ")^" + std::to_string(alpha));
}

ExampleModel build_custom(const CustomParams& params) {
  const std::size_t n = params.labels.size();
  if (n == 0) throw InvalidInput("custom space needs at least one point");
  if (params.distances.size() != n) throw InvalidInput("custom distance table must have one row per label");
  std::vector<double> table;
  for (const auto& row : params.distances) {
    if (row.size() != n) throw InvalidInput("custom distance table must be square");
    table.insert(table.end(), row.begin(), row.end());
  }
  FiniteMetricSpace space(params.labels, std::move(table), "custom");
  SelfMap phi = params.permutation.empty() ? SelfMap::identity(n) : SelfMap(params.permutation);
  if (phi.size() != n) throw InvalidInput("custom permutation must cover every point");
  TorusSpace torus(space, phi);
  const double expected_C = torus.C();
  return {"custom", std::move(space), std::move(phi), std::move(torus), std::nullopt, expected_C};
}

ExampleModel build_model(const ExampleSpec& spec) {
  struct Builder {
    ExampleModel operator()(const FullShiftParams& p) const { return build_full_shift(p.alphabet_size, p.a, p.max_period); }
    ExampleModel operator()(const TwoFixedPointsParams&) const { return build_two_fixed_points(); }
    ExampleModel operator()(const PadicCycleParams& p) const { return build_padic_cycle(p.p, p.m); }
    ExampleModel operator()(const SnowflakeIntervalParams& p) const {
      FiniteMetricSpace space = build_snowflake_interval(p.n, p.alpha);
      SelfMap phi = SelfMap::identity(space.size());
      TorusSpace torus(space, phi);
      return {"snowflake-interval", std::move(space), std::move(phi), std::move(torus), std::nullopt, 1.0};
    }
    ExampleModel operator()(const CustomParams& p) const { return build_custom(p); }
  };
  return std::visit(Builder{}, spec);
}

}  // namespace solenoid
