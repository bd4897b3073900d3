#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "solenoid/examples.hpp"
#include "solenoid/metric_core.hpp"

namespace solenoid::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Malformed configuration or command line; `path` names the offending field
/// (e.g. "checks[0]", "parameters.epsilon").
class UsageError : public std::runtime_error {
 public:
  UsageError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class Check {
  kMetricAxioms,
  kUltrametric,
  kBilipschitz,
  kQuotientD,
  kDelta0Sandwich,
  kFlowLaws,
  kConnectedness,
  kDenseOrbit,
  kMeasures,
  kDimension,
};

const char* to_string(Check check);
std::optional<Check> parse_check(std::string_view name);
/// Checks that draw random samples and therefore need a seed.
bool is_randomized(Check check);

struct CheckParameters {
  std::optional<double> epsilon;
  std::vector<double> radii;
  std::vector<double> scales;
  std::vector<double> times;    // torus sample = every base point at each time
  std::vector<double> weights;  // Bernoulli weights; empty means uniform
  std::size_t sample_size = 64; // random torus sample when no times are given
  std::size_t pairs = 1000;
  std::optional<std::uint64_t> seed;
  double tolerance = kDefaultTolerance;
  std::optional<double> expected_slope;
  double slope_tolerance = 0.1;
  std::optional<std::size_t> expected_components;
  PointId x0 = 0;
  std::int64_t max_iter = 64;
};

struct OutputSpec {
  std::string path;  // empty: stdout
  std::string format = "json";
};

struct ExportSpec {
  std::string metric = "d";  // d | dtilde | rho | D | delta | delta0
  std::vector<double> times;
};

struct ExperimentConfig {
  ExampleSpec space;
  std::vector<Check> checks;
  CheckParameters parameters;
  OutputSpec output;
  std::optional<ExportSpec> export_spec;
  nlohmann::json source;  // config echo
};

/// Validates against the published schema; throws UsageError with a field path.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides parameters.seed
  std::optional<double> tolerance;    // overrides parameters.tolerance
  bool timing = false;                // wall-clock fields break byte-identical reports
};

struct RunResult {
  nlohmann::json report;
  bool all_passed = true;
};

/// Runs every configured check in config order. Checks with status "report"
/// never fail.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});

/// CSV matrix of the configured metric; header row holds the point labels.
std::string export_matrix(const ExperimentConfig& config, const RunOptions& options = {});

nlohmann::json config_schema();

/// Entry point shared by the solenoid binary. Returns the process exit code:
/// 0 pass, 1 check failure, 2 usage error.
int main(int argc, char** argv);

}  // namespace solenoid::cli
