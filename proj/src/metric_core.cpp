#include "solenoid/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "solenoid/dynamics.hpp"
#include "solenoid/errors.hpp"

namespace solenoid {

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> distances,
                                     std::string tag, std::optional<ExactPowers> exact)
    : labels_(std::move(labels)), dist_(std::move(distances)), tag_(std::move(tag)), exact_(std::move(exact)) {
  const std::size_t n = labels_.size();
  if (dist_.size() != n * n) {
    throw InvalidInput("distance table has " + std::to_string(dist_.size()) + " entries, expected " +
                       std::to_string(n * n));
  }
  for (double d : dist_) {
    if (!std::isfinite(d) || d < 0.0) throw InvalidInput("distances must be finite and nonnegative");
  }
  if (exact_) {
    if (!(exact_->base > 0.0 && exact_->base < 1.0)) throw InvalidInput("exact base must lie in (0, 1)");
    if (exact_->exponents.size() != n * n) throw InvalidInput("exponent table has the wrong size");
  }
}

FiniteMetricSpace FiniteMetricSpace::from_function(std::vector<std::string> labels,
                                                   const std::function<double(PointId, PointId)>& dist,
                                                   std::string tag) {
  const std::size_t n = labels.size();
  std::vector<double> table(n * n);
  for (PointId i = 0; i < n; ++i) {
    for (PointId j = 0; j < n; ++j) table[i * n + j] = dist(i, j);
  }
  return FiniteMetricSpace(std::move(labels), std::move(table), std::move(tag));
}

std::optional<std::int64_t> FiniteMetricSpace::exponent(PointId x, PointId y) const {
  if (!exact_) return std::nullopt;
  return exact_->exponents[x * size() + y];
}

double FiniteMetricSpace::diameter() const {
  double best = 0.0;
  for (double d : dist_) best = std::max(best, d);
  return best;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kSymmetry: return "symmetry";
    case ViolationKind::kIdentity: return "identity";
    case ViolationKind::kTriangle: return "triangle";
    case ViolationKind::kUltrametric: return "ultrametric";
  }
  return "unknown";
}

namespace {

void record(std::vector<Violation>& list, std::size_t& count, Violation v) {
  if (list.size() < MetricReport::kMaxRecorded) list.push_back(v);
  ++count;
}

// Is exponent e1 strictly "farther" than the max of e2, e3? With base < 1 a
// larger exponent means a smaller distance, so the ultrametric inequality
// d(x,z) <= max(d(x,y), d(y,z)) reads e_xz >= min(e_xy, e_yz).
bool exact_ultrametric_fails(std::int64_t e_xz, std::int64_t e_xy, std::int64_t e_yz) {
  return e_xz < std::min(e_xy, e_yz);
}

MetricReport scan(const FiniteMetricSpace& space, double tol) {
  if (space.empty()) throw InvalidInput("metric verification needs at least one point");
  if (!(tol >= 0.0)) throw InvalidInput("tolerance must be nonnegative");

  MetricReport report;
  const std::size_t n = space.size();
  const bool exact = space.exact().has_value();

  for (PointId x = 0; x < n; ++x) {
    if (space.dist(x, x) > tol) {
      record(report.axiom_violations, report.axiom_violation_count,
             {ViolationKind::kIdentity, {x, x, x}, space.dist(x, x)});
    }
    for (PointId y = x + 1; y < n; ++y) {
      const double asym = std::abs(space.dist(x, y) - space.dist(y, x));
      if (asym > tol) {
        record(report.axiom_violations, report.axiom_violation_count,
               {ViolationKind::kSymmetry, {x, y, y}, asym});
      }
      if (space.dist(x, y) <= tol) {
        record(report.axiom_violations, report.axiom_violation_count,
               {ViolationKind::kIdentity, {x, y, y}, tol - space.dist(x, y)});
      }
    }
  }

  for (PointId x = 0; x < n; ++x) {
    for (PointId z = x + 1; z < n; ++z) {
      const double dxz = space.dist(x, z);
      for (PointId y = 0; y < n; ++y) {
        if (y == x || y == z) continue;
        const double dxy = space.dist(x, y);
        const double dyz = space.dist(y, z);
        const double tri = dxz - (dxy + dyz);
        if (tri > tol) {
          record(report.axiom_violations, report.axiom_violation_count,
                 {ViolationKind::kTriangle, {x, z, y}, tri});
        }
        const double ultra = dxz - std::max(dxy, dyz);
        const bool fails = exact ? exact_ultrametric_fails(*space.exponent(x, z), *space.exponent(x, y),
                                                           *space.exponent(y, z))
                                 : ultra > tol;
        if (fails) {
          record(report.ultrametric_violations, report.ultrametric_violation_count,
                 {ViolationKind::kUltrametric, {x, z, y}, ultra});
        }
      }
    }
  }

  report.diameter = space.diameter();
  report.is_metric = report.axiom_violation_count == 0;
  report.is_ultrametric = report.ultrametric_violation_count == 0;
  return report;
}

}  // namespace

MetricReport verify_metric_axioms(const FiniteMetricSpace& space, double tol) { return scan(space, tol); }

MetricReport verify_ultrametric(const FiniteMetricSpace& space, double tol) { return scan(space, tol); }

FiniteMetricSpace snowflake(const FiniteMetricSpace& space, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("snowflake exponent must be positive");
  std::vector<double> table(space.table().begin(), space.table().end());
  for (double& d : table) d = d == 0.0 ? 0.0 : std::pow(d, alpha);
  std::optional<ExactPowers> exact;
  if (space.exact()) {
    // a^{n alpha} = (a^alpha)^n, so the exponents carry over unchanged.
    exact = ExactPowers{std::pow(space.exact()->base, alpha), space.exact()->exponents};
  }
  return FiniteMetricSpace({space.labels().begin(), space.labels().end()}, std::move(table),
                           space.tag() + "^" + std::to_string(alpha), std::move(exact));
}

FiniteMetricSpace truncate(const FiniteMetricSpace& space, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidInput("truncation level must be positive");
  std::vector<double> table(space.table().begin(), space.table().end());
  bool changed = false;
  for (double& d : table) {
    if (d > k) {
      d = k;
      changed = true;
    }
  }
  std::optional<ExactPowers> exact = changed ? std::nullopt : space.exact();
  return FiniteMetricSpace({space.labels().begin(), space.labels().end()}, std::move(table),
                           "min(" + space.tag() + "," + std::to_string(k) + ")", std::move(exact));
}

FiniteMetricSpace rescale(const FiniteMetricSpace& space, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidInput("scale factor must be positive");
  std::vector<double> table(space.table().begin(), space.table().end());
  for (double& d : table) d *= factor;
  return FiniteMetricSpace({space.labels().begin(), space.labels().end()}, std::move(table),
                           std::to_string(factor) + "*" + space.tag());
}

double triangle_defect_ratio(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  double worst = 0.0;
  for (PointId x = 0; x < n; ++x) {
    for (PointId z = 0; z < n; ++z) {
      if (x == z) continue;
      for (PointId y = 0; y < n; ++y) {
        if (y == x || y == z) continue;
        const double denom = space.dist(x, y) + space.dist(y, z);
        if (denom > 0.0) worst = std::max(worst, space.dist(x, z) / denom);
      }
    }
  }
  return worst;
}

std::size_t greedy_cover_count(const FiniteMetricSpace& space, double eps, double tol) {
  std::vector<PointId> centers;
  for (PointId p = 0; p < space.size(); ++p) {
    const bool covered = std::any_of(centers.begin(), centers.end(),
                                     [&](PointId c) { return space.dist(c, p) <= eps + tol; });
    if (!covered) centers.push_back(p);
  }
  return centers.size();
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("least squares needs two or more paired samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidInput("least squares needs distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

DimensionFit box_counting_dimension(const FiniteMetricSpace& space, std::span<const double> scales) {
  if (scales.size() < 3) throw InvalidInput("box counting needs at least 3 scales");
  if (space.empty()) throw InvalidInput("box counting needs a nonempty space");
  const double diam = space.diameter();
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw InvalidInput("scales must be positive");
    if (i > 0 && !(scales[i] < scales[i - 1])) throw InvalidInput("scales must be strictly decreasing");
    // A one-point space has diameter 0 and admits any positive scale.
    if (diam > 0.0 && !(scales[i] < diam)) throw InvalidInput("scales must be smaller than the diameter");
  }

  DimensionFit fit;
  fit.scales.assign(scales.begin(), scales.end());
  std::vector<double> log_inv_scale, log_count;
  for (double eps : scales) {
    const std::size_t count = greedy_cover_count(space, eps);
    fit.counts.push_back(count);
    log_inv_scale.push_back(std::log(1.0 / eps));
    log_count.push_back(std::log(static_cast<double>(count)));
  }
  const LinearFit line = least_squares(log_inv_scale, log_count);
  fit.slope = line.slope;
  fit.r_squared = line.r_squared;
  return fit;
}

double sup_distance(const SelfMap& f, const SelfMap& g, const FiniteMetricSpace& space) {
  if (f.size() != space.size() || g.size() != space.size()) {
    throw InvalidInput("self-maps must be defined on every point of the space");
  }
  double best = 0.0;
  for (PointId x = 0; x < space.size(); ++x) best = std::max(best, space.dist(f(x), g(x)));
  return best;
}

}  // namespace solenoid
