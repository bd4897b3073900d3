#include "solenoid/mapping_torus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "solenoid/errors.hpp"

namespace solenoid {

namespace {

// Slack on the closed constraints |r' - t'| <= 1/2 and |r'|, |t'| <= 3/4 so
// that boundary cases survive rounding in r + m.
constexpr double kConstraintSlack = 1e-12;
constexpr double kTimeMatch = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

FiniteMetricSpace bound_diameter(FiniteMetricSpace base, double k, DiameterPolicy policy) {
  const double diam = base.diameter();
  if (diam <= k) return base;
  return policy == DiameterPolicy::kTruncate ? truncate(base, k) : rescale(base, k / diam);
}

double resolve_k(const FiniteMetricSpace& base, std::optional<double> k) {
  if (!k) return std::max(base.diameter(), 0.5);
  if (!(*k >= 0.5) || !std::isfinite(*k)) throw InvalidInput("diameter bound k must be at least 1/2");
  return *k;
}

bool is_admissible(double r, double t) {
  return std::abs(r - t) <= 0.5 + kConstraintSlack && std::abs(r) <= 0.75 + kConstraintSlack &&
         std::abs(t) <= 0.75 + kConstraintSlack;
}

bool is_centered(double r, double t) {
  return std::abs(r - t) <= 0.5 + kConstraintSlack && std::abs(r + t) <= 1.0 + 2 * kConstraintSlack;
}

void check_canonical(const TorusPoint& p, const TorusSpace& ts) {
  if (p.base >= ts.base_space().size()) throw InvalidInput("torus point base out of range");
  if (!(p.time >= 0.0 && p.time < 1.0)) throw InvalidInput("torus point time must lie in [0, 1)");
}

// Enumerates lifts (phi^m x, r + m), (phi^n y, t + n) for m, n in {-2..2}.
template <typename Visit>
void for_each_lift_pair(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts, Visit&& visit) {
  for (std::int64_t m = -2; m <= 2; ++m) {
    const Representative lp{ts.phi().iterate(p.base, m), p.time + static_cast<double>(m)};
    for (std::int64_t n = -2; n <= 2; ++n) {
      const Representative lq{ts.phi().iterate(q.base, n), q.time + static_cast<double>(n)};
      visit(m, n, lp, lq);
    }
  }
}

}  // namespace

TorusSpace::TorusSpace(FiniteMetricSpace base, SelfMap phi, std::optional<double> k, DiameterPolicy policy)
    : phi_(std::move(phi)) {
  if (base.empty()) throw InvalidInput("torus base space is empty");
  if (phi_.size() != base.size()) throw InvalidInput("map and base space sizes differ");
  k_ = resolve_k(base, k);
  base_ = bound_diameter(std::move(base), k_, policy);
  C_ = base_.size() >= 2 ? estimate_bilipschitz_constant(base_, phi_).C : 1.0;
}

TorusPoint canonicalize(PointId x, double t, const TorusSpace& ts) {
  if (!std::isfinite(t)) throw InvalidInput("torus time must be finite");
  if (x >= ts.base_space().size()) throw InvalidInput("torus point base out of range");
  const double shift = -std::floor(t);
  PointId base = ts.phi().iterate(x, static_cast<std::int64_t>(shift));
  double time = t + shift;
  // t + shift can round up to exactly 1 for tiny negative t.
  if (time >= 1.0) {
    time -= 1.0;
    base = ts.phi().backward(base);
  }
  return {base, time};
}

double rho(PointId x, double r, PointId y, double t, const TorusSpace& ts) {
  return std::max(ts.dist(x, y), std::abs(r - t));
}

double rho(const Representative& p, const Representative& q, const TorusSpace& ts) {
  return rho(p.base, p.time, q.base, q.time, ts);
}

double dist_to_integers(double a) { return std::abs(a - std::nearbyint(a)); }

double quotient_metric_D(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts) {
  if (!ts.is_isometric()) {
    throw UnsupportedInput("quotient metric D needs an isometric map (C = 1); use delta0 for C = " +
                           std::to_string(ts.C()));
  }
  check_canonical(p, ts);
  check_canonical(q, ts);
  // Only shifts with |r + n - t| <= k + 1 can compete: the nearest shift already
  // gives rho <= max(d, 1/2) <= k.
  const double k = ts.diameter_bound();
  const double gap = q.time - p.time;
  const auto lo = static_cast<std::int64_t>(std::ceil(gap - k - 1.0));
  const auto hi = static_cast<std::int64_t>(std::floor(gap + k + 1.0));
  double best = kInf;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const PointId x = ts.phi().iterate(p.base, n);
    best = std::min(best, rho(x, p.time + static_cast<double>(n), q.base, q.time, ts));
  }
  if (!(best <= k + kConstraintSlack)) {
    throw std::logic_error("quotient metric enumeration bound violated");
  }
  return best;
}

RepresentativePair delta_minimizer(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts) {
  check_canonical(p, ts);
  check_canonical(q, ts);
  RepresentativePair best{{}, {}, kInf};
  for_each_lift_pair(p, q, ts, [&](std::int64_t m, std::int64_t n, const Representative& lp, const Representative& lq) {
    if (!is_admissible(lp.time, lq.time)) return;
    // Canonical times force both shifts into {-1, 0}; the wider window is a check.
    if (m < -1 || m > 0 || n < -1 || n > 0) throw std::logic_error("admissible lift outside shifts {-1, 0}");
    const double value = rho(lp, lq, ts);
    if (value < best.rho) best = {lp, lq, value};
  });
  if (best.rho == kInf) throw std::logic_error("no admissible representative pair");
  return best;
}

double delta(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts) {
  return delta_minimizer(p, q, ts).rho;
}

RepresentativePair centered_representatives(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts) {
  check_canonical(p, ts);
  check_canonical(q, ts);
  RepresentativePair best{{}, {}, kInf};
  double best_mid = kInf;
  for_each_lift_pair(p, q, ts, [&](std::int64_t, std::int64_t, const Representative& lp, const Representative& lq) {
    if (!is_centered(lp.time, lq.time)) return;
    const double mid = std::abs(lp.time + lq.time);
    if (mid < best_mid) {
      best_mid = mid;
      best = {lp, lq, rho(lp, lq, ts)};
    }
  });
  if (best.rho == kInf) throw std::logic_error("no centered representative pair");
  return best;
}

ChainMetric::ChainMetric(const TorusSpace& ts, std::vector<TorusPoint> sample) : sample_(std::move(sample)) {
  const std::size_t n = sample_.size();
  if (n == 0) throw InvalidInput("chain metric needs a nonempty sample");
  for (const auto& p : sample_) check_canonical(p, ts);
  edges_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges_[i * n + j] = edges_[j * n + i] = delta(sample_[i], sample_[j], ts);
  }
  dist_.assign(n * n, kInf);
  pred_.assign(n * n, n);
  solved_.assign(n, false);

  if (n > kDenseLimit) return;
  // Floyd-Warshall; pred_[i*n + j] is the vertex before j on the path from i.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist_[i * n + j] = edges_[i * n + j];
      pred_[i * n + j] = i;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ik = dist_[i * n + k];
      for (std::size_t j = 0; j < n; ++j) {
        const double via = ik + dist_[k * n + j];
        if (via < dist_[i * n + j]) {
          dist_[i * n + j] = via;
          pred_[i * n + j] = pred_[k * n + j];
        }
      }
    }
  }
  solved_.assign(n, true);
}

void ChainMetric::ensure_source(std::size_t s) const {
  if (solved_[s]) return;
  // Dense Dijkstra, O(n^2).
  const std::size_t n = size();
  std::vector<bool> done(n, false);
  double* dist = &dist_[s * n];
  std::size_t* pred = &pred_[s * n];
  dist[s] = 0.0;
  pred[s] = s;
  for (std::size_t iter = 0; iter < n; ++iter) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && (u == n || dist[v] < dist[u])) u = v;
    }
    done[u] = true;
    for (std::size_t v = 0; v < n; ++v) {
      const double via = dist[u] + edges_[u * n + v];
      if (!done[v] && via < dist[v]) {
        dist[v] = via;
        pred[v] = u;
      }
    }
  }
  solved_[s] = true;
}

double ChainMetric::value(std::size_t i, std::size_t j) const {
  ensure_source(i);
  return dist_[i * size() + j];
}

ChainWitness ChainMetric::witness(std::size_t i, std::size_t j) const {
  ensure_source(i);
  const std::size_t n = size();
  std::vector<std::size_t> path{j};
  for (std::size_t v = j; v != i;) {
    v = pred_[i * n + v];
    path.push_back(v);
  }
  std::reverse(path.begin(), path.end());
  ChainWitness w;
  for (std::size_t idx = 0; idx < path.size(); ++idx) {
    w.points.push_back(sample_[path[idx]]);
    if (idx > 0) {
      const double e = edge(path[idx - 1], path[idx]);
      w.edge_values.push_back(e);
      w.total += e;
    }
  }
  return w;
}

std::optional<std::size_t> ChainMetric::find(const TorusPoint& p) const {
  for (std::size_t i = 0; i < sample_.size(); ++i) {
    if (sample_[i].base == p.base && std::abs(sample_[i].time - p.time) <= kTimeMatch) return i;
  }
  return std::nullopt;
}

ChainDistance delta0(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts,
                     std::span<const TorusPoint> sample) {
  const ChainMetric chain(ts, {sample.begin(), sample.end()});
  const auto i = chain.find(p);
  const auto j = chain.find(q);
  if (!i || !j) throw InvalidInput("delta0 endpoints must belong to the sample");
  return {chain.value(*i, *j), chain.witness(*i, *j)};
}

TorusPoint flow(const TorusPoint& p, double r, const TorusSpace& ts) {
  check_canonical(p, ts);
  return canonicalize(p.base, p.time + r, ts);
}

std::vector<TorusPoint> fiber(double t, std::span<const PointId> bases, const TorusSpace& ts) {
  std::vector<TorusPoint> out;
  out.reserve(bases.size());
  for (PointId x : bases) out.push_back(canonicalize(x, t, ts));
  return out;
}

double project_to_circle(const TorusPoint& p) { return p.time; }

double circle_distance(double a, double b) { return dist_to_integers(a - b); }

bool same_point(const TorusPoint& p, const TorusPoint& q, const TorusSpace& ts, double tol) {
  if (std::abs(p.time - q.time) <= tol) return p.base == q.base;
  // (x, 1 - e) ~ (phi^{-1} x, -e), which sits next to (phi^{-1} x, 0).
  if (p.time >= 1.0 - tol && q.time <= tol) return q.base == ts.phi().backward(p.base) && (1.0 - p.time) + q.time <= tol;
  if (q.time >= 1.0 - tol && p.time <= tol) return p.base == ts.phi().backward(q.base) && (1.0 - q.time) + p.time <= tol;
  return false;
}

}  // namespace solenoid
