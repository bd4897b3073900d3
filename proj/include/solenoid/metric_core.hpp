#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace solenoid {

using PointId = std::size_t;

/// Default absolute tolerance for floating-point distance comparisons.
inline constexpr double kDefaultTolerance = 1e-9;

/// Exponent used for the distance between equal points (a^inf = 0).
inline constexpr std::int64_t kInfiniteExponent = std::numeric_limits<std::int64_t>::max();

/// Exact representation of a metric whose nonzero values are integer powers
/// of a common base in (0, 1). Lets ultrametric comparisons run on integers.
struct ExactPowers {
  double base = 0.5;
  std::vector<std::int64_t> exponents;  // row-major, kInfiniteExponent for equal points
};

/// An indexed finite point set with a dense distance table.
///
/// Construction checks only that the table is square, finite and nonnegative;
/// metric axioms are verified on demand by verify_metric_axioms so that
/// deliberately broken "spaces" can be inspected too.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> distances,
                    std::string tag = {}, std::optional<ExactPowers> exact = std::nullopt);

  static FiniteMetricSpace from_function(std::vector<std::string> labels,
                                         const std::function<double(PointId, PointId)>& dist,
                                         std::string tag = {});

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  double dist(PointId x, PointId y) const { return dist_[x * size() + y]; }
  std::span<const double> row(PointId x) const {
    return std::span<const double>(dist_).subspan(x * size(), size());
  }
  std::span<const double> table() const { return dist_; }

  const std::string& label(PointId x) const { return labels_[x]; }
  std::span<const std::string> labels() const { return labels_; }
  const std::string& tag() const { return tag_; }

  const std::optional<ExactPowers>& exact() const { return exact_; }
  /// Exponent of dist(x, y) when the space carries exact powers.
  std::optional<std::int64_t> exponent(PointId x, PointId y) const;

  double diameter() const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> dist_;
  std::string tag_;
  std::optional<ExactPowers> exact_;
};

enum class ViolationKind { kSymmetry, kIdentity, kTriangle, kUltrametric };

const char* to_string(ViolationKind kind);

/// For triangle-type violations the inequality checked is
/// dist(x, z) <= combine(dist(x, via), dist(via, z)).
struct Triple {
  PointId x = 0;
  PointId z = 0;
  PointId via = 0;
};

struct Violation {
  ViolationKind kind = ViolationKind::kTriangle;
  Triple triple;
  double slack = 0.0;  // amount by which the inequality fails
};

struct MetricReport {
  /// Only the first kMaxRecorded violations of each family are stored; the
  /// counts are exact.
  static constexpr std::size_t kMaxRecorded = 64;

  std::vector<Violation> axiom_violations;
  std::size_t axiom_violation_count = 0;
  std::vector<Violation> ultrametric_violations;
  std::size_t ultrametric_violation_count = 0;
  double diameter = 0.0;
  bool is_metric = true;
  bool is_ultrametric = true;
};

/// Exhaustive check of symmetry, identity of indiscernibles and the triangle
/// inequality over all pairs and triples. Also fills the ultrametric fields.
MetricReport verify_metric_axioms(const FiniteMetricSpace& space, double tol = kDefaultTolerance);

/// Records every triple with dist(x,z) > max(dist(x,y), dist(y,z)) + tol.
/// When the space carries exact powers the comparison is done on exponents
/// and tol is ignored.
MetricReport verify_ultrametric(const FiniteMetricSpace& space, double tol = kDefaultTolerance);

/// dist -> dist^alpha. For alpha > 1 the result is generally only a quasi-metric.
FiniteMetricSpace snowflake(const FiniteMetricSpace& space, double alpha);

/// dist -> min(dist, k).
FiniteMetricSpace truncate(const FiniteMetricSpace& space, double k);

/// dist -> factor * dist.
FiniteMetricSpace rescale(const FiniteMetricSpace& space, double factor);

/// max over triples of dist(x,z) / (dist(x,y) + dist(y,z)); <= 1 for a metric.
/// This is the measured quasi-metric constant of a snowflake with alpha > 1.
double triangle_defect_ratio(const FiniteMetricSpace& space);

struct DimensionFit {
  std::vector<double> scales;
  std::vector<std::size_t> counts;
  double slope = 0.0;
  double r_squared = 1.0;
};

/// First-fit greedy covering count: points are visited in index order and a
/// new center is opened whenever a point lies farther than eps (+ tol) from
/// every existing center.
std::size_t greedy_cover_count(const FiniteMetricSpace& space, double eps,
                               double tol = kDefaultTolerance);

/// Least-squares slope of log(count) against log(1/scale).
DimensionFit box_counting_dimension(const FiniteMetricSpace& space, std::span<const double> scales);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

/// Unweighted least squares y ~ slope * x + intercept. A constant response
/// reports r_squared = 1.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

class SelfMap;

/// sigma(f, g) = max_x dist(f(x), g(x)).
double sup_distance(const SelfMap& f, const SelfMap& g, const FiniteMetricSpace& space);

}  // namespace solenoid
