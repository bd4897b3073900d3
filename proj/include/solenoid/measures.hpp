#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "solenoid/mapping_torus.hpp"
#include "solenoid/symbolic_space.hpp"

namespace solenoid {

/// Probability vector on the alphabet; generates the Bernoulli measure mu_w.
class WeightVector {
 public:
  /// Entries in [0, 1] summing to 1 within 1e-12.
  explicit WeightVector(std::vector<double> weights);
  static WeightVector uniform(std::size_t alphabet_size);

  std::size_t size() const { return weights_.size(); }
  double weight(Symbol s) const { return weights_[s]; }
  std::span<const double> weights() const { return weights_; }
  double min_weight() const;
  bool strictly_positive() const { return min_weight() > 0.0; }
  bool is_uniform() const;

 private:
  std::vector<double> weights_;
};

/// Sequences with prescribed symbols on finitely many indices.
class CylinderSet {
 public:
  CylinderSet() = default;
  explicit CylinderSet(std::map<std::int64_t, Symbol> constraints) : constraints_(std::move(constraints)) {}

  /// The closed d_a-ball of radius a^depth: agreement on -depth+1 <= j <= depth.
  static CylinderSet ball(const PeriodicSequence& center, std::int64_t depth);

  const std::map<std::int64_t, Symbol>& constraints() const { return constraints_; }
  bool contains(const PeriodicSequence& x) const;
  /// Re-indexes every constraint j -> j + offset.
  CylinderSet shifted(std::int64_t offset) const;

 private:
  std::map<std::int64_t, Symbol> constraints_;
};

/// Product of w over the constrained coordinates (taken in index order).
double cylinder_measure(const CylinderSet& cyl, const WeightVector& w);

/// max |mu(C) - mu(shifted C)| over the cylinders; 0 for a Bernoulli measure.
double shift_invariance_check(const WeightVector& w, std::span<const CylinderSet> cylinders);

/// Smallest n >= 0 with a^n <= r: the closed ball of radius r is the depth-n cylinder.
std::int64_t ball_depth(double r, double a);

double base_ball_measure(const PeriodicSequence& center, double r, const ShiftConfig& cfg, const WeightVector& w);

/// mu_w(base ball of radius r) * min(2r, 1), the product-metric ball in the
/// locally-product regime 0 < r <= 1/2. Throws OutOfRegime otherwise.
double torus_ball_measure(const TorusPoint& p, double r, const ShiftSample& sample, const WeightVector& w);

/// Banded report of measure(B(p, r)) / r^expected_dim.
struct AhlforsReport {
  double c_low = 0.0;
  double c_high = 0.0;
  double fitted_exponent = 0.0;   // pooled log-log slope; NaN with a single radius
  std::vector<double> radii;      // sorted descending
  std::vector<double> spread;     // per radius: max/min ratio across centers
  bool spread_grows = false;      // finest spread > 4x coarsest: not regular

  double band() const { return c_high / c_low; }
};

AhlforsReport ahlfors_check_base(std::span<const PeriodicSequence> centers, std::span<const double> radii,
                                 double expected_dim, const ShiftConfig& cfg, const WeightVector& w);

/// Radii must lie in (0, 1/2].
AhlforsReport ahlfors_check(std::span<const TorusPoint> samples, std::span<const double> radii, double expected_dim,
                            const ShiftSample& sample, const WeightVector& w);

/// max over centers and radii of mu(B(2r)) / mu(B(r)). Needs strictly positive weights.
double doubling_check_base(std::span<const PeriodicSequence> centers, std::span<const double> radii,
                           const ShiftConfig& cfg, const WeightVector& w);

/// Torus mode; every radius needs 2r <= 1/2.
double doubling_check(std::span<const TorusPoint> samples, std::span<const double> radii, const ShiftSample& sample,
                      const WeightVector& w);

/// -2 log(#B) / log(a), the Ahlfors dimension of the uniform Bernoulli measure.
double uniform_shift_dimension(const ShiftConfig& cfg);

}  // namespace solenoid
