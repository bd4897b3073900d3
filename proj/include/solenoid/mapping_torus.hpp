#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "solenoid/dynamics.hpp"
#include "solenoid/metric_core.hpp"

namespace solenoid {

/// Canonical representative (x, t), 0 <= t < 1, of a point of the mapping
/// torus (X x R) / ((x, t) ~ (phi^n x, t + n)).
struct TorusPoint {
  PointId base = 0;
  double time = 0.0;

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

/// An arbitrary lift (x, t) in X x R, not necessarily canonical.
struct Representative {
  PointId base = 0;
  double time = 0.0;
};

enum class DiameterPolicy {
  kTruncate,  // d -> min(d, k)
  kRescale,   // d -> (k / diam) d
};

/// Base space, bilipschitz homeomorphism and diameter bound k >= 1/2.
///
/// The base metric is brought under diameter k on construction; C is the
/// exact bilipschitz constant of phi on the resulting finite space.
class TorusSpace {
 public:
  /// k defaults to max(diameter, 1/2), in which case the base is left as is.
  TorusSpace(FiniteMetricSpace base, SelfMap phi, std::optional<double> k = std::nullopt,
             DiameterPolicy policy = DiameterPolicy::kTruncate);

  const FiniteMetricSpace& base_space() const { return base_; }
  const SelfMap& phi() const { return phi_; }
  double C() const { return C_; }
  double diameter_bound() const { return k_; }
  bool is_isometric() const { return C_ <= 1.0 + 1e-12; }

  double dist(PointId x, PointId y) const { return base_.dist(x, y); }

 private:
  FiniteMetricSpace base_;
  SelfMap phi_;
  double k_ = 0.5;
  double C_ = 1.0;
};

/// Reduces (x, t) to the equivalent representative with time in [0, 1).
TorusPoint canonicalize(PointId x, double t, const TorusSpace& ts);

/// Product metric max(d(x, y), |r - t|) on X x R.
double rho(PointId x, double r, PointId y, double t, const TorusSpace& ts);
double rho(const Representative& p, const Representative& q, const TorusSpace& ts);

/// min_n |a - n|, in [0, 1/2].
double dist_to_integers(double a);

/// Quotient metric of rho for an isometric phi. Throws UnsupportedInput when
/// C > 1; use delta0 there.
double quotient_metric_D(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts);

struct RepresentativePair {
  Representative first;
  Representative second;
  double rho = 0.0;
};

/// Minimum of rho over lifts (x', r'), (y', t') with |r' - t'| <= 1/2 and
/// |r'|, |t'| <= 3/4. Symmetric, zero exactly on equal points, but not a metric.
double delta(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts);
RepresentativePair delta_minimizer(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts);

/// Lifts with |r' - t'| <= 1/2 and |(r' + t') / 2| <= 1/2; rho is evaluated on them.
RepresentativePair centered_representatives(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts);

struct ChainWitness {
  std::vector<TorusPoint> points;
  std::vector<double> edge_values;
  double total = 0.0;
};

struct ChainDistance {
  double value = 0.0;
  ChainWitness witness;
};

/// Chain metric delta0 restricted to chains through a fixed finite sample:
/// shortest paths in the complete graph whose edge weights are delta.
///
/// Samples of up to kDenseLimit points are solved all-pairs up front; larger
/// samples run a single-source pass per queried source, cached.
class ChainMetric {
 public:
  static constexpr std::size_t kDenseLimit = 512;

  ChainMetric(const TorusSpace& ts, std::vector<TorusPoint> sample);

  std::size_t size() const { return sample_.size(); }
  std::span<const TorusPoint> sample() const { return sample_; }
  const TorusPoint& point(std::size_t i) const { return sample_[i]; }

  double edge(std::size_t i, std::size_t j) const { return edges_[i * size() + j]; }
  double value(std::size_t i, std::size_t j) const;
  ChainWitness witness(std::size_t i, std::size_t j) const;

  /// Index of p in the sample, matching times within 1e-12.
  std::optional<std::size_t> find(const TorusPoint& p) const;

 private:
  void ensure_source(std::size_t i) const;

  std::vector<TorusPoint> sample_;
  std::vector<double> edges_;
  // Row i holds distances / predecessors from source i once solved.
  mutable std::vector<double> dist_;
  mutable std::vector<std::size_t> pred_;
  mutable std::vector<bool> solved_;
};

/// delta0(p, q) over chains through `sample`, which must contain p and q.
ChainDistance delta0(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts,
                     std::span<const TorusPoint> sample);

/// A_r: translation of the time coordinate, re-canonicalized.
TorusPoint flow(const TorusPoint& p, double r, const TorusSpace& ts);

/// psi_t: x -> [(x, t)] for every x in `bases`.
std::vector<TorusPoint> fiber(double t, std::span<const PointId> bases, const TorusSpace& ts);

/// Image in R/Z, represented in [0, 1).
double project_to_circle(const TorusPoint& p);

/// Quotient distance on R/Z.
double circle_distance(double a, double b);

/// Equality of torus points with time tolerance, accounting for the seam at
/// t = 0 ~ 1 where (x, 1-) ~ (phi^{-1} x, 0-).
bool same_point(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts, double tol = 1e-12);

}  // namespace solenoid
