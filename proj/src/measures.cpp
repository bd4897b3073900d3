#include "solenoid/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "solenoid/errors.hpp"

namespace solenoid {

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.size() < 2) throw InvalidInput("weight vector needs at least two symbols");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0 && w <= 1.0)) throw InvalidInput("weights must lie in [0, 1]");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidInput("weights must sum to 1");
}

WeightVector WeightVector::uniform(std::size_t alphabet_size) {
  return WeightVector(std::vector<double>(alphabet_size, 1.0 / static_cast<double>(alphabet_size)));
}

double WeightVector::min_weight() const { return *std::min_element(weights_.begin(), weights_.end()); }

bool WeightVector::is_uniform() const {
  return std::all_of(weights_.begin(), weights_.end(), [&](double w) { return w == weights_.front(); });
}

CylinderSet CylinderSet::ball(const PeriodicSequence& center, std::int64_t depth) {
  if (depth < 0) throw InvalidInput("ball depth must be nonnegative");
  std::map<std::int64_t, Symbol> constraints;
  for (std::int64_t j = -depth + 1; j <= depth; ++j) constraints.emplace(j, center.at(j));
  return CylinderSet(std::move(constraints));
}

bool CylinderSet::contains(const PeriodicSequence& x) const {
  return std::all_of(constraints_.begin(), constraints_.end(), [&](const auto& c) { return x.at(c.first) == c.second; });
}

CylinderSet CylinderSet::shifted(std::int64_t offset) const {
  std::map<std::int64_t, Symbol> moved;
  for (const auto& [j, s] : constraints_) moved.emplace(j + offset, s);
  return CylinderSet(std::move(moved));
}

double cylinder_measure(const CylinderSet& cyl, const WeightVector& w) {
  double m = 1.0;
  for (const auto& [j, s] : cyl.constraints()) {
    if (s >= w.size()) throw InvalidInput("cylinder symbol outside the alphabet");
    m *= w.weight(s);
  }
  return m;
}

double shift_invariance_check(const WeightVector& w, std::span<const CylinderSet> cylinders) {
  double worst = 0.0;
  for (const auto& cyl : cylinders) {
    worst = std::max(worst, std::abs(cylinder_measure(cyl, w) - cylinder_measure(cyl.shifted(1), w)));
  }
  return worst;
}

std::int64_t ball_depth(double r, double a) {
  if (!(r > 0.0)) throw InvalidInput("radius must be positive");
  if (!(a > 0.0 && a < 1.0)) throw InvalidInput("a must lie in (0, 1)");
  if (r >= 1.0) return 0;
  // Exact powers r = a^n must give n, not n + 1.
  const double n = std::ceil(std::log(r) / std::log(a) - 1e-9);
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(n));
}

double base_ball_measure(const PeriodicSequence& center, double r, const ShiftConfig& cfg, const WeightVector& w) {
  if (w.size() != cfg.alphabet().size()) throw InvalidInput("weight vector and alphabet sizes differ");
  return cylinder_measure(CylinderSet::ball(center, ball_depth(r, cfg.a())), w);
}

double torus_ball_measure(const TorusPoint& p, double r, const ShiftSample& sample, const WeightVector& w) {
  if (!(r > 0.0)) throw InvalidInput("radius must be positive");
  if (r > 0.5) throw OutOfRegime("torus ball measure is only product-exact for r <= 1/2");
  if (p.base >= sample.size()) throw InvalidInput("torus point base outside the shift sample");
  return base_ball_measure(sample.point(p.base), r, sample.config(), w) * std::min(2.0 * r, 1.0);
}

namespace {

using MeasureFn = std::function<double(std::size_t center, double r)>;

AhlforsReport ahlfors_impl(std::size_t centers, std::span<const double> radii_in, double expected_dim,
                           const MeasureFn& measure) {
  if (centers == 0 || radii_in.empty()) throw InvalidInput("Ahlfors check needs samples and radii");
  if (!(expected_dim > 0.0)) throw InvalidInput("expected dimension must be positive");

  AhlforsReport report;
  report.radii.assign(radii_in.begin(), radii_in.end());
  std::sort(report.radii.begin(), report.radii.end(), std::greater<>());
  report.c_low = std::numeric_limits<double>::infinity();
  report.c_high = 0.0;

  std::vector<double> log_r, log_m;
  for (double r : report.radii) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t c = 0; c < centers; ++c) {
      const double m = measure(c, r);
      const double ratio = m / std::pow(r, expected_dim);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      log_r.push_back(std::log(r));
      log_m.push_back(std::log(m));
    }
    report.spread.push_back(hi / lo);
    report.c_low = std::min(report.c_low, lo);
    report.c_high = std::max(report.c_high, hi);
  }

  const bool distinct_radii = report.radii.front() != report.radii.back();
  report.fitted_exponent =
      distinct_radii ? least_squares(log_r, log_m).slope : std::numeric_limits<double>::quiet_NaN();
  report.spread_grows = report.spread.back() > 4.0 * report.spread.front();
  return report;
}

void require_positive_weights(const WeightVector& w) {
  if (!w.strictly_positive()) throw InvalidInput("doubling check needs strictly positive weights");
}

}  // namespace

AhlforsReport ahlfors_check_base(std::span<const PeriodicSequence> centers, std::span<const double> radii,
                                 double expected_dim, const ShiftConfig& cfg, const WeightVector& w) {
  return ahlfors_impl(centers.size(), radii, expected_dim,
                      [&](std::size_t c, double r) { return base_ball_measure(centers[c], r, cfg, w); });
}

AhlforsReport ahlfors_check(std::span<const TorusPoint> samples, std::span<const double> radii, double expected_dim,
                            const ShiftSample& sample, const WeightVector& w) {
  for (double r : radii) {
    if (!(r > 0.0 && r <= 0.5)) throw OutOfRegime("torus Ahlfors radii must lie in (0, 1/2]");
  }
  return ahlfors_impl(samples.size(), radii, expected_dim,
                      [&](std::size_t c, double r) { return torus_ball_measure(samples[c], r, sample, w); });
}

double doubling_check_base(std::span<const PeriodicSequence> centers, std::span<const double> radii,
                           const ShiftConfig& cfg, const WeightVector& w) {
  require_positive_weights(w);
  if (centers.empty() || radii.empty()) throw InvalidInput("doubling check needs samples and radii");
  double worst = 0.0;
  for (const auto& x : centers) {
    for (double r : radii) {
      worst = std::max(worst, base_ball_measure(x, 2.0 * r, cfg, w) / base_ball_measure(x, r, cfg, w));
    }
  }
  return worst;
}

double doubling_check(std::span<const TorusPoint> samples, std::span<const double> radii, const ShiftSample& sample,
                      const WeightVector& w) {
  require_positive_weights(w);
  if (samples.empty() || radii.empty()) throw InvalidInput("doubling check needs samples and radii");
  double worst = 0.0;
  for (const auto& p : samples) {
    for (double r : radii) {
      if (!(2.0 * r <= 0.5)) throw OutOfRegime("torus doubling radii need 2r <= 1/2");
      worst = std::max(worst, torus_ball_measure(p, 2.0 * r, sample, w) / torus_ball_measure(p, r, sample, w));
    }
  }
  return worst;
}

double uniform_shift_dimension(const ShiftConfig& cfg) {
  return -2.0 * std::log(static_cast<double>(cfg.alphabet().size())) / std::log(cfg.a());
}

}  // namespace solenoid
