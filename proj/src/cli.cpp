#include "solenoid/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "solenoid/connectedness.hpp"
#include "solenoid/dynamics.hpp"
#include "solenoid/errors.hpp"
#include "solenoid/mapping_torus.hpp"
#include "solenoid/measures.hpp"

namespace solenoid::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxWitnesses = 8;

struct CheckName {
  Check check;
  const char* name;
};

constexpr CheckName kCheckNames[] = {
    {Check::kMetricAxioms, "metric-axioms"},   {Check::kUltrametric, "ultrametric"},
    {Check::kBilipschitz, "bilipschitz"},      {Check::kQuotientD, "quotient-D"},
    {Check::kDelta0Sandwich, "delta0-sandwich"}, {Check::kFlowLaws, "flow-laws"},
    {Check::kConnectedness, "connectedness"},  {Check::kDenseOrbit, "dense-orbit"},
    {Check::kMeasures, "measures"},            {Check::kDimension, "dimension"},
};

}  // namespace

const char* to_string(Check check) {
  for (const auto& entry : kCheckNames) {
    if (entry.check == check) return entry.name;
  }
  return "unknown";
}

std::optional<Check> parse_check(std::string_view name) {
  for (const auto& entry : kCheckNames) {
    if (name == entry.name) return entry.check;
  }
  return std::nullopt;
}

bool is_randomized(Check check) {
  return check == Check::kQuotientD || check == Check::kDelta0Sandwich || check == Check::kFlowLaws ||
         check == Check::kMeasures;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw UsageError(path + "." + key, "required field is missing");
  return obj.at(key);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw UsageError(path, "expected a number");
  return v.get<double>();
}

std::uint64_t as_unsigned(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw UsageError(path, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw UsageError(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> as_numbers(const json& v, const std::string& path) {
  if (!v.is_array()) throw UsageError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw UsageError(path.empty() ? key : path + "." + key, "unknown field");
    }
  }
}

ExampleSpec parse_space(const json& space) {
  const std::string path = "space";
  if (!space.is_object()) throw UsageError(path, "expected an object");
  const std::string kind = as_string(require(space, "kind", path), path + ".kind");
  if (kind == "full-shift") {
    reject_unknown(space, {"kind", "alphabet_size", "a", "max_period"}, path);
    FullShiftParams p;
    if (space.contains("alphabet_size")) p.alphabet_size = as_unsigned(space["alphabet_size"], path + ".alphabet_size");
    if (space.contains("a")) p.a = as_number(space["a"], path + ".a");
    if (space.contains("max_period")) p.max_period = as_unsigned(space["max_period"], path + ".max_period");
    if (p.alphabet_size < 2) throw UsageError(path + ".alphabet_size", "must be at least 2");
    if (!(p.a > 0.0 && p.a < 1.0)) throw UsageError(path + ".a", "must lie in (0, 1)");
    if (p.max_period < 1) throw UsageError(path + ".max_period", "must be at least 1");
    return p;
  }
  if (kind == "two-fixed-points") {
    reject_unknown(space, {"kind"}, path);
    return TwoFixedPointsParams{};
  }
  if (kind == "padic-cycle") {
    reject_unknown(space, {"kind", "p", "m"}, path);
    PadicCycleParams p;
    if (space.contains("p")) p.p = as_unsigned(space["p"], path + ".p");
    if (space.contains("m")) p.m = static_cast<std::uint32_t>(as_unsigned(space["m"], path + ".m"));
    if (!is_prime(p.p)) throw UsageError(path + ".p", "must be prime");
    if (p.m < 1) throw UsageError(path + ".m", "must be at least 1");
    return p;
  }
  if (kind == "snowflake-interval") {
    reject_unknown(space, {"kind", "n", "alpha"}, path);
    SnowflakeIntervalParams p;
    if (space.contains("n")) p.n = as_unsigned(space["n"], path + ".n");
    if (space.contains("alpha")) p.alpha = as_number(space["alpha"], path + ".alpha");
    if (p.n < 2) throw UsageError(path + ".n", "must be at least 2");
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw UsageError(path + ".alpha", "must lie in (0, 1]");
    return p;
  }
  if (kind == "custom") {
    reject_unknown(space, {"kind", "labels", "distances", "permutation"}, path);
    CustomParams p;
    const json& labels = require(space, "labels", path);
    if (!labels.is_array()) throw UsageError(path + ".labels", "expected an array of strings");
    for (std::size_t i = 0; i < labels.size(); ++i) p.labels.push_back(as_string(labels[i], path + ".labels[" + std::to_string(i) + "]"));
    const json& rows = require(space, "distances", path);
    if (!rows.is_array() || rows.size() != p.labels.size()) throw UsageError(path + ".distances", "expected one row per label");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string row_path = path + ".distances[" + std::to_string(i) + "]";
      p.distances.push_back(as_numbers(rows[i], row_path));
      if (p.distances.back().size() != p.labels.size()) throw UsageError(row_path, "row length must equal the label count");
    }
    if (space.contains("permutation")) {
      const json& perm = space["permutation"];
      if (!perm.is_array()) throw UsageError(path + ".permutation", "expected an array of indices");
      for (std::size_t i = 0; i < perm.size(); ++i) p.permutation.push_back(as_unsigned(perm[i], path + ".permutation[" + std::to_string(i) + "]"));
    }
    return p;
  }
  throw UsageError(path + ".kind", "unknown space kind '" + kind + "'");
}

CheckParameters parse_parameters(const json& params) {
  const std::string path = "parameters";
  CheckParameters out;
  if (params.is_null()) return out;
  if (!params.is_object()) throw UsageError(path, "expected an object");
  reject_unknown(params,
                 {"epsilon", "radii", "scales", "times", "weights", "sample_size", "pairs", "seed", "tolerance",
                  "expected_slope", "slope_tolerance", "expected_components", "x0", "max_iter"},
                 path);
  auto field = [&](const char* key) { return path + "." + key; };
  if (params.contains("epsilon")) {
    out.epsilon = as_number(params["epsilon"], field("epsilon"));
    if (!(*out.epsilon > 0.0)) throw UsageError(field("epsilon"), "must be positive");
  }
  if (params.contains("radii")) out.radii = as_numbers(params["radii"], field("radii"));
  if (params.contains("scales")) out.scales = as_numbers(params["scales"], field("scales"));
  if (params.contains("times")) out.times = as_numbers(params["times"], field("times"));
  if (params.contains("weights")) out.weights = as_numbers(params["weights"], field("weights"));
  if (params.contains("sample_size")) out.sample_size = as_unsigned(params["sample_size"], field("sample_size"));
  if (params.contains("pairs")) out.pairs = as_unsigned(params["pairs"], field("pairs"));
  if (params.contains("seed")) out.seed = as_unsigned(params["seed"], field("seed"));
  if (params.contains("tolerance")) {
    out.tolerance = as_number(params["tolerance"], field("tolerance"));
    if (!(out.tolerance >= 0.0)) throw UsageError(field("tolerance"), "must be nonnegative");
  }
  if (params.contains("expected_slope")) out.expected_slope = as_number(params["expected_slope"], field("expected_slope"));
  if (params.contains("slope_tolerance")) out.slope_tolerance = as_number(params["slope_tolerance"], field("slope_tolerance"));
  if (params.contains("expected_components")) out.expected_components = as_unsigned(params["expected_components"], field("expected_components"));
  if (params.contains("x0")) out.x0 = as_unsigned(params["x0"], field("x0"));
  if (params.contains("max_iter")) {
    out.max_iter = static_cast<std::int64_t>(as_unsigned(params["max_iter"], field("max_iter")));
    if (out.max_iter < 1) throw UsageError(field("max_iter"), "must be at least 1");
  }
  if (out.sample_size < 1) throw UsageError(field("sample_size"), "must be at least 1");
  return out;
}

const char* kExportMetrics[] = {"d", "dtilde", "rho", "D", "delta", "delta0"};

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw UsageError("$", "config must be a JSON object");
  reject_unknown(doc, {"space", "checks", "parameters", "output", "export"}, "");
  ExperimentConfig config;
  config.source = doc;
  config.space = parse_space(require(doc, "space", "$").is_object() ? doc["space"] : json());

  if (doc.contains("checks")) {
    const json& checks = doc["checks"];
    if (!checks.is_array()) throw UsageError("checks", "expected an array of check names");
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const std::string path = "checks[" + std::to_string(i) + "]";
      const auto check = parse_check(as_string(checks[i], path));
      if (!check) throw UsageError(path, "unknown check '" + checks[i].get<std::string>() + "'");
      config.checks.push_back(*check);
    }
  }
  config.parameters = parse_parameters(doc.contains("parameters") ? doc["parameters"] : json());

  if (doc.contains("output")) {
    const json& out = doc["output"];
    if (!out.is_object()) throw UsageError("output", "expected an object");
    reject_unknown(out, {"path", "format"}, "output");
    if (out.contains("path")) config.output.path = as_string(out["path"], "output.path");
    if (out.contains("format")) config.output.format = as_string(out["format"], "output.format");
    if (config.output.format != "json" && config.output.format != "csv") {
      throw UsageError("output.format", "must be \"json\" or \"csv\"");
    }
  }

  if (doc.contains("export")) {
    const json& ex = doc["export"];
    if (!ex.is_object()) throw UsageError("export", "expected an object");
    reject_unknown(ex, {"metric", "times"}, "export");
    ExportSpec spec;
    if (ex.contains("metric")) spec.metric = as_string(ex["metric"], "export.metric");
    if (std::none_of(std::begin(kExportMetrics), std::end(kExportMetrics), [&](const char* m) { return spec.metric == m; })) {
      throw UsageError("export.metric", "unknown metric '" + spec.metric + "'");
    }
    if (ex.contains("times")) spec.times = as_numbers(ex["times"], "export.times");
    config.export_spec = spec;
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config", "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

// ---------------------------------------------------------------------------
// Checks

namespace {

struct Context {
  const ExperimentConfig& config;
  const ExampleModel& model;
  const CheckParameters& params;
  double tol;
};

json status(bool pass) { return pass ? "pass" : "fail"; }

json pair_json(const FiniteMetricSpace& space, PointPair p) {
  return json{{"x", p.first}, {"y", p.second}, {"labels", {space.label(p.first), space.label(p.second)}}};
}

json torus_json(const TorusSpace& ts, const TorusPoint& p) {
  return json{{"base", p.base}, {"label", ts.base_space().label(p.base)}, {"time", p.time}};
}

json violations_json(const FiniteMetricSpace& space, const std::vector<Violation>& list) {
  json out = json::array();
  for (std::size_t i = 0; i < list.size() && i < kMaxWitnesses; ++i) {
    const auto& v = list[i];
    out.push_back({{"kind", to_string(v.kind)},
                   {"x", space.label(v.triple.x)},
                   {"z", space.label(v.triple.z)},
                   {"via", space.label(v.triple.via)},
                   {"slack", v.slack}});
  }
  return out;
}

std::uint64_t seed_of(const Context& ctx) {
  if (!ctx.params.seed) throw UsageError("parameters.seed", "required by randomized checks");
  return *ctx.params.seed;
}

/// Every base point at each configured time, or a seeded uniform sample.
std::vector<TorusPoint> torus_sample(const Context& ctx, std::mt19937_64& rng) {
  const TorusSpace& ts = ctx.model.torus;
  std::vector<TorusPoint> sample;
  if (!ctx.params.times.empty()) {
    for (double t : ctx.params.times) {
      for (PointId x = 0; x < ts.base_space().size(); ++x) sample.push_back(canonicalize(x, t, ts));
    }
    return sample;
  }
  std::uniform_int_distribution<PointId> base(0, ts.base_space().size() - 1);
  std::uniform_real_distribution<double> time(0.0, 1.0);
  for (std::size_t i = 0; i < ctx.params.sample_size; ++i) {
    const PointId x = base(rng);
    sample.push_back(canonicalize(x, time(rng), ts));
  }
  return sample;
}

json check_metric(const Context& ctx, bool ultrametric) {
  const auto report = ultrametric ? verify_ultrametric(ctx.model.space, ctx.tol) : verify_metric_axioms(ctx.model.space, ctx.tol);
  const bool pass = ultrametric ? report.is_ultrametric : report.is_metric;
  json out{{"status", status(pass)},
           {"points", ctx.model.space.size()},
           {"diameter", report.diameter},
           {"is_metric", report.is_metric},
           {"is_ultrametric", report.is_ultrametric},
           {"axiom_violations", report.axiom_violation_count},
           {"ultrametric_violations", report.ultrametric_violation_count},
           {"exact_exponents", ctx.model.space.exact().has_value()}};
  const auto& list = ultrametric ? report.ultrametric_violations : report.axiom_violations;
  if (!list.empty()) out["witnesses"] = violations_json(ctx.model.space, list);
  return out;
}

json check_bilipschitz(const Context& ctx) {
  const auto est = estimate_bilipschitz_constant(ctx.model.space, ctx.model.phi);
  const bool pass = est.C <= ctx.model.expected_C + ctx.tol;
  json upper = json::array(), lower = json::array();
  for (std::size_t i = 0; i < est.upper_attaining.size() && i < kMaxWitnesses; ++i) upper.push_back(pair_json(ctx.model.space, est.upper_attaining[i]));
  for (std::size_t i = 0; i < est.lower_attaining.size() && i < kMaxWitnesses; ++i) lower.push_back(pair_json(ctx.model.space, est.lower_attaining[i]));
  return {{"status", status(pass)},
          {"C", est.C},
          {"c_upper", est.c_upper},
          {"c_lower", est.c_lower},
          {"expected_C", ctx.model.expected_C},
          {"upper_attaining", upper},
          {"lower_attaining", lower}};
}

json check_quotient_D(const Context& ctx) {
  const TorusSpace& ts = ctx.model.torus;
  if (!ts.is_isometric()) {
    return {{"status", "fail"}, {"reason", "quotient metric D needs an isometric map; C = " + std::to_string(ts.C()) + ", use delta0-sandwich"}};
  }
  std::mt19937_64 rng(seed_of(ctx));
  const auto sample = torus_sample(ctx, rng);
  const std::size_t n = sample.size();
  std::vector<std::string> labels;
  for (const auto& p : sample) labels.push_back(ts.base_space().label(p.base) + "@" + std::to_string(p.time));
  std::vector<double> table(n * n);
  std::size_t upper = 0, lower = 0, equality = 0, comparison = 0, regime_pairs = 0;
  json witness = nullptr;
  const double k = ts.diameter_bound();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& p = sample[i];
      const auto& q = sample[j];
      const double D = quotient_metric_D(p, q, ts);
      table[i * n + j] = D;
      const double r = rho(p.base, p.time, q.base, q.time, ts);
      const double gap = std::abs(p.time - q.time);
      auto flag = [&](std::size_t& counter, const char* what) {
        ++counter;
        if (witness.is_null()) witness = {{"violation", what}, {"p", torus_json(ts, p)}, {"q", torus_json(ts, q)}, {"D", D}, {"rho", r}};
      };
      if (D > r + ctx.tol) flag(upper, "D > rho");
      if (D < dist_to_integers(p.time - q.time) - ctx.tol) flag(lower, "D < dist(r - t, Z)");
      if (gap <= 0.5) {
        if (r > 2.0 * k * D + ctx.tol) flag(comparison, "rho > 2k D");
        if (ts.dist(p.base, q.base) <= 0.5) {
          ++regime_pairs;
          if (std::abs(D - r) > ctx.tol) flag(equality, "D != rho in the equality regime");
        }
      }
    }
  }
  const auto axioms = verify_metric_axioms(FiniteMetricSpace(labels, table, "D"), ctx.tol);
  // Distinct sample entries may coincide as torus points; identity failures
  // between them are not metric failures.
  std::size_t triangle = 0;
  for (const auto& v : axioms.axiom_violations) triangle += v.kind == ViolationKind::kTriangle || v.kind == ViolationKind::kSymmetry;
  const bool pass = upper == 0 && lower == 0 && equality == 0 && comparison == 0 && triangle == 0;
  json out{{"status", status(pass)},
           {"sample_points", n},
           {"equality_regime_pairs", regime_pairs},
           {"violations", {{"D_above_rho", upper}, {"D_below_circle", lower}, {"equality", equality},
                           {"rho_above_2kD", comparison}, {"triangle_or_symmetry", triangle}}}};
  if (!witness.is_null()) out["witness"] = witness;
  return out;
}

json check_delta0(const Context& ctx) {
  const TorusSpace& ts = ctx.model.torus;
  std::mt19937_64 rng(seed_of(ctx));
  const auto sample = torus_sample(ctx, rng);
  const ChainMetric chain(ts, sample);
  const std::size_t n = chain.size();
  const double C = ts.C();
  const double k = ts.diameter_bound();
  const double factor = std::max(C, 2.0 * k);

  std::size_t sandwich = 0;
  json witness = nullptr;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t trial = 0; trial < ctx.params.pairs; ++trial) {
    const std::size_t i = pick(rng), j = pick(rng);
    const auto reps = centered_representatives(chain.point(i), chain.point(j), ts);
    const double r = reps.rho;
    const double d0 = chain.value(i, j);
    const double d = chain.edge(i, j);
    const char* failed = nullptr;
    if (std::min(r / C, 0.5) > d0 + ctx.tol) failed = "min(rho/C, 1/2) > delta0";
    else if (d0 > d + ctx.tol) failed = "delta0 > delta";
    else if (d > r + ctx.tol) failed = "delta > rho";
    else if (r > factor * d0 + ctx.tol) failed = "rho > max(C, 2k) delta0";
    else if (d0 > k + ctx.tol) failed = "delta0 > k";
    else if (d0 < dist_to_integers(chain.point(i).time - chain.point(j).time) - ctx.tol) failed = "delta0 < dist(r - t, Z)";
    if (failed) {
      ++sandwich;
      if (witness.is_null()) {
        witness = {{"violation", failed}, {"p", torus_json(ts, chain.point(i))}, {"q", torus_json(ts, chain.point(j))},
                   {"rho", r}, {"delta", d}, {"delta0", d0}};
      }
    }
  }

  std::size_t triangle0 = 0;
  std::optional<std::array<std::size_t, 3>> delta_violation;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t z = 0; z < n; ++z) {
      for (std::size_t y = 0; y < n; ++y) {
        if (chain.value(x, z) > chain.value(x, y) + chain.value(y, z) + ctx.tol) {
          ++triangle0;
          if (witness.is_null()) {
            witness = {{"violation", "delta0 triangle"}, {"x", torus_json(ts, chain.point(x))},
                       {"y", torus_json(ts, chain.point(y))}, {"z", torus_json(ts, chain.point(z))}};
          }
        }
        if (!delta_violation && chain.edge(x, z) > chain.edge(x, y) + chain.edge(y, z) + ctx.tol) delta_violation = {x, y, z};
      }
    }
  }

  json out{{"status", status(sandwich == 0 && triangle0 == 0)},
           {"sample_points", n},
           {"pairs", ctx.params.pairs},
           {"C", C},
           {"k", k},
           {"sandwich_violations", sandwich},
           {"delta0_triangle_violations", triangle0}};
  if (!witness.is_null()) out["witness"] = witness;
  if (delta_violation) {
    const auto [x, y, z] = *delta_violation;
    out["delta_triangle_violation"] = {{"x", torus_json(ts, chain.point(x))}, {"y", torus_json(ts, chain.point(y))},
                                       {"z", torus_json(ts, chain.point(z))}, {"delta_xz", chain.edge(x, z)},
                                       {"delta_xy", chain.edge(x, y)}, {"delta_yz", chain.edge(y, z)}};
  } else {
    out["delta_triangle_violation"] = "none found on this sample";
  }
  return out;
}

json check_flow(const Context& ctx) {
  const TorusSpace& ts = ctx.model.torus;
  std::mt19937_64 rng(seed_of(ctx));
  std::uniform_int_distribution<PointId> base(0, ts.base_space().size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> offset(-5.0, 5.0);
  std::uniform_int_distribution<int> dyadic(-4096, 4096);

  std::size_t group = 0, identity = 0, periodicity = 0, fiber_map = 0;
  double worst_time_error = 0.0;
  json witness = nullptr;
  auto note = [&](std::size_t& counter, const char* what, const TorusPoint& p, double r) {
    ++counter;
    if (witness.is_null()) witness = {{"violation", what}, {"p", torus_json(ts, p)}, {"r", r}};
  };
  for (std::size_t trial = 0; trial < ctx.params.pairs; ++trial) {
    const TorusPoint p = canonicalize(base(rng), unit(rng), ts);
    const double r = offset(rng), s = offset(rng);
    const TorusPoint lhs = flow(flow(p, r, ts), s, ts);
    const TorusPoint rhs = flow(p, r + s, ts);
    if (!same_point(lhs, rhs, ts, 1e-12)) note(group, "group law", p, r);
    if (lhs.base == rhs.base) worst_time_error = std::max(worst_time_error, std::abs(lhs.time - rhs.time));
    if (!(flow(p, 0.0, ts) == p)) note(identity, "flow by 0", p, 0.0);

    // Dyadic times keep t + 1 exact, so periodicity is checked bit for bit.
    const double t = dyadic(rng) / 256.0;
    const PointId x = base(rng);
    if (!(canonicalize(ts.phi()(x), t + 1.0, ts) == canonicalize(x, t, ts))) note(periodicity, "fiber periodicity", {x, t}, 1.0);
    const TorusPoint moved = flow(canonicalize(x, t, ts), r, ts);
    if (!same_point(moved, canonicalize(x, t + r, ts), ts, 1e-12)) note(fiber_map, "flow maps fibers", {x, t}, r);
  }
  const bool pass = group == 0 && identity == 0 && periodicity == 0 && fiber_map == 0;
  return {{"status", status(pass)},
          {"witness", witness},
          {"trials", ctx.params.pairs},
          {"worst_time_error", worst_time_error},
          {"violations", {{"group_law", group}, {"flow_zero", identity}, {"fiber_periodicity", periodicity},
                          {"flow_maps_fibers", fiber_map}}}};
}

double require_epsilon(const Context& ctx) {
  if (!ctx.params.epsilon) throw UsageError("parameters.epsilon", "required by this check");
  return *ctx.params.epsilon;
}

json check_connectedness(const Context& ctx) {
  const double eps = require_epsilon(ctx);
  const auto partition = invariant_components(ctx.model.space, ctx.model.phi, eps);
  json out{{"epsilon", eps},
           {"sample", ctx.model.space.tag() + " (" + std::to_string(ctx.model.space.size()) + " points)"},
           {"component_count", partition.component_count()},
           {"components", partition.blocks},
           {"invariant", partition.invariant},
           {"witness", partition.witness ? json(*partition.witness) : json(nullptr)},
           {"summary", std::to_string(partition.component_count()) + " components"}};
  if (!partition.invariant) {
    out["status"] = "fail";
  } else if (ctx.params.expected_components) {
    out["expected_components"] = *ctx.params.expected_components;
    out["status"] = status(partition.component_count() == *ctx.params.expected_components);
  } else {
    out["status"] = "report";
  }
  return out;
}

json check_dense_orbit(const Context& ctx) {
  const double eps = require_epsilon(ctx);
  if (ctx.params.x0 >= ctx.model.space.size()) throw UsageError("parameters.x0", "point index out of range");
  const auto result = dense_orbit_check(ctx.model.space, ctx.model.phi, ctx.params.x0, eps, ctx.params.max_iter);
  return {{"status", "report"},
          {"epsilon", eps},
          {"x0", ctx.params.x0},
          {"max_iter", ctx.params.max_iter},
          {"dense", result.dense},
          {"covering_fraction", result.covering_fraction},
          {"uncovered", result.uncovered}};
}

json measure_report(const char* mode, double dim, const AhlforsReport& r, std::size_t samples) {
  return {{"mode", mode}, {"expected_dim", dim}, {"c_low", r.c_low}, {"c_high", r.c_high},
          {"fitted_exponent", std::isnan(r.fitted_exponent) ? json(nullptr) : json(r.fitted_exponent)},
          {"spread_grows", r.spread_grows}, {"samples", samples}, {"radii", r.radii}};
}

json check_measures(const Context& ctx) {
  if (!ctx.model.shift) return {{"status", "fail"}, {"reason", "measures need a shift-space model"}};
  const ShiftSample& sample = *ctx.model.shift;
  const ShiftConfig& cfg = sample.config();
  const std::size_t b = cfg.alphabet().size();
  const WeightVector w = ctx.params.weights.empty() ? WeightVector::uniform(b) : WeightVector(ctx.params.weights);
  if (w.size() != b) throw UsageError("parameters.weights", "needs one weight per alphabet symbol");
  std::mt19937_64 rng(seed_of(ctx));

  // Uniform ball identity mu(B(x, a^n)) = (#B)^{-2n}.
  std::size_t identity_failures = 0;
  json witness = nullptr;
  // 1/#B is exact in binary only for powers of two; otherwise allow rounding.
  const bool dyadic = (b & (b - 1)) == 0;
  const double identity_tol = dyadic ? 0.0 : 1e-12;
  if (w.is_uniform()) {
    for (std::int64_t n = 0; n <= 6; ++n) {
      const double expected = std::pow(static_cast<double>(b), -2.0 * static_cast<double>(n));
      for (const auto& x : sample.points()) {
        const double got = cylinder_measure(CylinderSet::ball(x, n), w);
        if (std::abs(got - expected) <= identity_tol * expected) continue;
        ++identity_failures;
        if (witness.is_null()) witness = {{"center", x.to_string(cfg.alphabet())}, {"depth", n}, {"measure", got}, {"expected", expected}};
      }
    }
  }

  std::vector<CylinderSet> cylinders;
  std::uniform_int_distribution<std::int64_t> index(-20, 20);
  std::uniform_int_distribution<int> symbol(0, static_cast<int>(b) - 1);
  std::uniform_int_distribution<int> count(0, 8);
  for (int c = 0; c < 100; ++c) {
    std::map<std::int64_t, Symbol> constraints;
    for (int k = count(rng); k > 0; --k) constraints[index(rng)] = static_cast<Symbol>(symbol(rng));
    cylinders.emplace_back(std::move(constraints));
  }
  const double discrepancy = shift_invariance_check(w, cylinders);
  if (discrepancy != 0.0 && witness.is_null()) {
    for (const auto& cyl : cylinders) {
      if (cylinder_measure(cyl, w) == cylinder_measure(cyl.shifted(1), w)) continue;
      json constraints = json::object();
      for (const auto& [j, s] : cyl.constraints()) constraints[std::to_string(j)] = s;
      witness = {{"cylinder", constraints}, {"measure", cylinder_measure(cyl, w)}, {"shifted_measure", cylinder_measure(cyl.shifted(1), w)}};
      break;
    }
  }

  const double dim = uniform_shift_dimension(cfg);
  std::vector<double> base_radii;
  for (int n = 0; n <= 6; ++n) base_radii.push_back(std::pow(cfg.a(), n));
  const auto base = ahlfors_check_base(sample.points(), base_radii, dim, cfg, w);
  const std::vector<double> doubling_radii(base_radii.begin() + 1, base_radii.end());

  std::vector<double> torus_radii = ctx.params.radii;
  if (torus_radii.empty()) torus_radii = {0.5, 0.25, 0.125, 0.0625, 0.03125};
  std::vector<TorusPoint> centers;
  std::uniform_real_distribution<double> time(0.0, 1.0);
  for (PointId x = 0; x < sample.size(); ++x) centers.push_back({x, time(rng)});
  const auto torus = ahlfors_check(centers, torus_radii, dim + 1.0, sample, w);

  json doubling = nullptr;
  if (w.strictly_positive()) doubling = doubling_check_base(sample.points(), doubling_radii, cfg, w);

  const bool pass = identity_failures == 0 && discrepancy == 0.0;
  return {{"status", status(pass)},
          {"witness", witness},
          {"weights", std::vector<double>(w.weights().begin(), w.weights().end())},
          {"uniform_ball_identity_failures", identity_failures},
          {"uniform_ball_identity_tolerance", identity_tol},
          {"shift_invariance_discrepancy", discrepancy},
          {"doubling_ratio_base", doubling},
          {"reports", {measure_report("base", dim, base, sample.size()), measure_report("torus", dim + 1.0, torus, centers.size())}}};
}

json check_dimension(const Context& ctx) {
  if (ctx.params.scales.empty()) throw UsageError("parameters.scales", "required by the dimension check");
  DimensionFit fit;
  try {
    fit = box_counting_dimension(ctx.model.space, ctx.params.scales);
  } catch (const InvalidInput& e) {
    throw UsageError("parameters.scales", e.what());
  }
  json out{{"scales", fit.scales}, {"counts", fit.counts}, {"slope", fit.slope}, {"r_squared", fit.r_squared}};
  if (ctx.params.expected_slope) {
    out["expected_slope"] = *ctx.params.expected_slope;
    out["status"] = status(std::abs(fit.slope - *ctx.params.expected_slope) <= ctx.params.slope_tolerance);
  } else {
    out["status"] = "report";
  }
  return out;
}

json run_check(Check check, const Context& ctx) {
  switch (check) {
    case Check::kMetricAxioms: return check_metric(ctx, false);
    case Check::kUltrametric: return check_metric(ctx, true);
    case Check::kBilipschitz: return check_bilipschitz(ctx);
    case Check::kQuotientD: return check_quotient_D(ctx);
    case Check::kDelta0Sandwich: return check_delta0(ctx);
    case Check::kFlowLaws: return check_flow(ctx);
    case Check::kConnectedness: return check_connectedness(ctx);
    case Check::kDenseOrbit: return check_dense_orbit(ctx);
    case Check::kMeasures: return check_measures(ctx);
    case Check::kDimension: return check_dimension(ctx);
  }
  return {{"status", "fail"}, {"reason", "unhandled check"}};
}

ExperimentConfig with_overrides(const ExperimentConfig& config, const RunOptions& options) {
  ExperimentConfig out = config;
  if (options.seed) {
    out.parameters.seed = options.seed;
    out.source["parameters"]["seed"] = *options.seed;
  }
  if (options.tolerance) {
    out.parameters.tolerance = *options.tolerance;
    out.source["parameters"]["tolerance"] = *options.tolerance;
  }
  return out;
}

ExampleModel build_or_usage(const ExampleSpec& spec) {
  try {
    return build_model(spec);
  } catch (const InvalidInput& e) {
    throw UsageError("space", e.what());
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

RunResult run(const ExperimentConfig& config_in, const RunOptions& options) {
  const ExperimentConfig config = with_overrides(config_in, options);
  if (config.checks.empty()) throw UsageError("checks", "at least one check is required");
  if (!config.parameters.seed) {
    for (std::size_t i = 0; i < config.checks.size(); ++i) {
      if (is_randomized(config.checks[i])) {
        throw UsageError("parameters.seed", std::string("required by check '") + to_string(config.checks[i]) + "'");
      }
    }
  }
  const ExampleModel model = build_or_usage(config.space);
  const Context ctx{config, model, config.parameters, config.parameters.tolerance};

  RunResult result;
  json checks = json::array();
  for (const Check check : config.checks) {
    const auto start = std::chrono::steady_clock::now();
    json entry = run_check(check, ctx);
    entry["name"] = to_string(check);
    if (options.timing) {
      entry["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    if (entry["status"] == "fail") result.all_passed = false;
    checks.push_back(std::move(entry));
  }
  result.report = {{"tool", "solenoid"},
                   {"version", kVersion},
                   {"config", config.source},
                   {"model", {{"kind", model.kind}, {"points", model.space.size()}, {"C", model.torus.C()},
                              {"k", model.torus.diameter_bound()}}},
                   {"checks", std::move(checks)},
                   {"passed", result.all_passed}};
  return result;
}

std::string export_matrix(const ExperimentConfig& config_in, const RunOptions& options) {
  const ExperimentConfig config = with_overrides(config_in, options);
  const ExportSpec spec = config.export_spec.value_or(ExportSpec{});
  const ExampleModel model = build_or_usage(config.space);
  const TorusSpace& ts = model.torus;

  std::vector<std::string> labels;
  std::vector<double> table;
  if (spec.metric == "d" || spec.metric == "dtilde") {
    const FiniteMetricSpace space = spec.metric == "d" ? model.space : adapted_metric(model.space, model.phi);
    labels.assign(space.labels().begin(), space.labels().end());
    table.assign(space.table().begin(), space.table().end());
  } else {
    std::vector<double> times = spec.times.empty() ? config.parameters.times : spec.times;
    if (times.empty()) {
      if (spec.metric == "delta0") throw UsageError("export.times", "delta0 needs a sample; give export.times");
      times = {0.0};
    }
    std::vector<TorusPoint> sample;
    for (double t : times) {
      for (PointId x = 0; x < ts.base_space().size(); ++x) {
        sample.push_back(canonicalize(x, t, ts));
        labels.push_back(ts.base_space().label(x) + "@" + format_number(t));
      }
    }
    const std::size_t n = sample.size();
    table.resize(n * n);
    if (spec.metric == "delta0") {
      const ChainMetric chain(ts, sample);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) table[i * n + j] = chain.value(i, j);
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const auto& p = sample[i];
          const auto& q = sample[j];
          if (spec.metric == "rho") {
            table[i * n + j] = rho(p.base, p.time, q.base, q.time, ts);
          } else if (spec.metric == "D") {
            try {
              table[i * n + j] = quotient_metric_D(p, q, ts);
            } catch (const UnsupportedInput& e) {
              throw UsageError("export.metric", e.what());
            }
          } else {
            table[i * n + j] = delta(p, q, ts);
          }
        }
      }
    }
  }

  std::ostringstream out;
  const std::size_t n = labels.size();
  for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << csv_field(labels[i]);
  out << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out << (j ? "," : "") << format_number(table[i * n + j]);
    out << "\n";
  }
  return out.str();
}

json config_schema() {
  static const char* kSchema = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "solenoid experiment config",
  "type": "object",
  "required": ["space"],
  "additionalProperties": false,
  "properties": {
    "space": {
      "type": "object",
      "required": ["kind"],
      "oneOf": [
        {"properties": {"kind": {"const": "full-shift"}, "alphabet_size": {"type": "integer", "minimum": 2},
                        "a": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                        "max_period": {"type": "integer", "minimum": 1}}, "additionalProperties": false},
        {"properties": {"kind": {"const": "two-fixed-points"}}, "additionalProperties": false},
        {"properties": {"kind": {"const": "padic-cycle"}, "p": {"type": "integer", "description": "prime"},
                        "m": {"type": "integer", "minimum": 1}}, "additionalProperties": false},
        {"properties": {"kind": {"const": "snowflake-interval"}, "n": {"type": "integer", "minimum": 2},
                        "alpha": {"type": "number", "exclusiveMinimum": 0, "maximum": 1}}, "additionalProperties": false},
        {"properties": {"kind": {"const": "custom"}, "labels": {"type": "array", "items": {"type": "string"}},
                        "distances": {"type": "array", "items": {"type": "array", "items": {"type": "number", "minimum": 0}}},
                        "permutation": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
         "required": ["labels", "distances"], "additionalProperties": false}
      ]
    },
    "checks": {
      "type": "array",
      "items": {"enum": ["metric-axioms", "ultrametric", "bilipschitz", "quotient-D", "delta0-sandwich",
                         "flow-laws", "connectedness", "dense-orbit", "measures", "dimension"]}
    },
    "parameters": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "epsilon": {"type": "number", "exclusiveMinimum": 0},
        "radii": {"type": "array", "items": {"type": "number"}},
        "scales": {"type": "array", "items": {"type": "number"}},
        "times": {"type": "array", "items": {"type": "number"}},
        "weights": {"type": "array", "items": {"type": "number", "minimum": 0, "maximum": 1}},
        "sample_size": {"type": "integer", "minimum": 1},
        "pairs": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer", "minimum": 0, "description": "required by quotient-D, delta0-sandwich, flow-laws, measures"},
        "tolerance": {"type": "number", "minimum": 0},
        "expected_slope": {"type": "number"},
        "slope_tolerance": {"type": "number"},
        "expected_components": {"type": "integer", "minimum": 1},
        "x0": {"type": "integer", "minimum": 0},
        "max_iter": {"type": "integer", "minimum": 1}
      }
    },
    "output": {
      "type": "object",
      "additionalProperties": false,
      "properties": {"path": {"type": "string"}, "format": {"enum": ["json", "csv"]}}
    },
    "export": {
      "type": "object",
      "additionalProperties": false,
      "properties": {"metric": {"enum": ["d", "dtilde", "rho", "D", "delta", "delta0"]},
                     "times": {"type": "array", "items": {"type": "number"}}}
    }
  }
})json";
  return json::parse(kSchema);
}

namespace {

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("output.path", "cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite models of mapping tori over metric dynamical systems"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool timing = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "override parameters.seed");
    sub->add_option("--tol", tol, "override parameters.tolerance");
    sub->add_option("--out", out_path, "write output here instead of output.path / stdout");
  };
  CLI::App* run_cmd = app.add_subcommand("run", "run the configured checks and print a JSON report");
  add_common(run_cmd);
  run_cmd->add_flag("--timing", timing, "add wall-clock timings to the report");
  CLI::App* export_cmd = app.add_subcommand("export", "print a CSV distance matrix");
  add_common(export_cmd);
  CLI::App* schema_cmd = app.add_subcommand("schema", "print the config JSON schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (schema_cmd->parsed()) {
      std::cout << config_schema().dump(2) << "\n";
      return 0;
    }
    const ExperimentConfig config = load_config(config_path);
    const RunOptions options{seed, tol, timing};
    const std::string target = out_path.empty() ? config.output.path : out_path;
    if (run_cmd->parsed()) {
      if (config.output.format == "csv") throw UsageError("output.format", "reports are JSON; use export for CSV");
      const RunResult result = run(config, options);
      write_output(result.report.dump(2) + "\n", target);
      return result.all_passed ? 0 : 1;
    }
    write_output(export_matrix(config, options), target);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace solenoid::cli
