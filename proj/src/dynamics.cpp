#include "solenoid/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "solenoid/errors.hpp"

namespace solenoid {

const char* to_string(MapKind kind) {
  switch (kind) {
    case MapKind::kPermutationTable: return "permutation-table";
    case MapKind::kShiftMap: return "shift-map";
    case MapKind::kGroupTranslation: return "group-translation";
  }
  return "unknown";
}

SelfMap::SelfMap(std::vector<PointId> forward, MapKind kind)
    : forward_(std::move(forward)), backward_(forward_.size(), forward_.size()), kind_(kind) {
  const std::size_t n = forward_.size();
  for (PointId x = 0; x < n; ++x) {
    const PointId y = forward_[x];
    if (y >= n) throw InvalidInput("self-map image " + std::to_string(y) + " out of range");
    if (backward_[y] != n) throw InvalidInput("self-map is not injective at image " + std::to_string(y));
    backward_[y] = x;
  }
}

SelfMap SelfMap::identity(std::size_t n) {
  std::vector<PointId> table(n);
  std::iota(table.begin(), table.end(), PointId{0});
  return SelfMap(std::move(table));
}

SelfMap SelfMap::translation(std::size_t n, std::int64_t step) {
  if (n == 0) throw InvalidInput("translation needs a nonempty group");
  const auto m = static_cast<std::int64_t>(n);
  const std::int64_t s = ((step % m) + m) % m;
  std::vector<PointId> table(n);
  for (std::int64_t x = 0; x < m; ++x) table[static_cast<std::size_t>(x)] = static_cast<PointId>((x + s) % m);
  return SelfMap(std::move(table), MapKind::kGroupTranslation);
}

std::size_t SelfMap::cycle_length(PointId x) const {
  std::size_t len = 1;
  for (PointId y = forward_[x]; y != x; y = forward_[y]) ++len;
  return len;
}

PointId SelfMap::iterate(PointId x, std::int64_t n) const {
  if (n == 0) return x;
  auto steps = n > 0 ? static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(-(n + 1)) + 1;
  if (steps > size()) steps %= cycle_length(x);
  const auto& table = n > 0 ? forward_ : backward_;
  for (std::uint64_t i = 0; i < steps; ++i) x = table[x];
  return x;
}

SelfMap SelfMap::inverse() const {
  SelfMap inv;
  inv.forward_ = backward_;
  inv.backward_ = forward_;
  inv.kind_ = kind_;
  return inv;
}

SelfMap SelfMap::power(std::int64_t n) const {
  std::vector<PointId> table(size());
  for (PointId x = 0; x < size(); ++x) table[x] = iterate(x, n);
  return SelfMap(std::move(table), kind_);
}

std::uint64_t SelfMap::order() const {
  std::uint64_t result = 1;
  std::vector<bool> seen(size(), false);
  for (PointId x = 0; x < size(); ++x) {
    if (seen[x]) continue;
    std::uint64_t len = 0;
    for (PointId y = x; !seen[y]; y = forward_[y]) {
      seen[y] = true;
      ++len;
    }
    result = std::lcm(result, len);
  }
  return result;
}

BilipschitzEstimate estimate_bilipschitz_constant(const FiniteMetricSpace& space, const SelfMap& phi) {
  if (space.size() < 2) throw InvalidInput("bilipschitz estimate needs at least two points");
  if (phi.size() != space.size()) throw InvalidInput("map and space sizes differ");

  BilipschitzEstimate est;
  est.c_lower = 0.0;
  est.c_upper = 0.0;
  for (PointId x = 0; x < space.size(); ++x) {
    for (PointId y = x + 1; y < space.size(); ++y) {
      const double before = space.dist(x, y);
      const double after = space.dist(phi(x), phi(y));
      if (before <= 0.0 || after <= 0.0) {
        throw InvalidInput("bilipschitz estimate needs positive distances between distinct points");
      }
      const double expand = after / before;
      const double contract = before / after;
      if (expand > est.c_upper) {
        est.c_upper = expand;
        est.upper_attaining.clear();
      }
      if (expand == est.c_upper) est.upper_attaining.emplace_back(x, y);
      if (contract > est.c_lower) {
        est.c_lower = contract;
        est.lower_attaining.clear();
      }
      if (contract == est.c_lower) est.lower_attaining.emplace_back(x, y);
    }
  }
  est.C = std::max(est.c_lower, est.c_upper);
  return est;
}

IsometryCheck verify_isometry(const FiniteMetricSpace& space, const SelfMap& phi, double tol) {
  if (phi.size() != space.size()) throw InvalidInput("map and space sizes differ");
  IsometryCheck check;
  for (PointId x = 0; x < space.size(); ++x) {
    for (PointId y = x + 1; y < space.size(); ++y) {
      const double defect = std::abs(space.dist(phi(x), phi(y)) - space.dist(x, y));
      if (defect > check.worst_defect) {
        check.worst_defect = defect;
        check.worst_pair = {x, y};
      }
    }
  }
  check.is_isometry = check.worst_defect <= tol;
  return check;
}

FiniteMetricSpace adapted_metric(const FiniteMetricSpace& space, const SelfMap& phi) {
  if (phi.size() != space.size()) throw UnsupportedInput("adapted metric needs a permutation of the space's points");
  const std::size_t n = space.size();
  std::vector<double> table(n * n, 0.0);
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = x + 1; y < n; ++y) {
      // Walk the pair orbit until it closes up: lcm of the two cycle lengths.
      double best = space.dist(x, y);
      PointId u = phi(x), v = phi(y);
      while (u != x || v != y) {
        best = std::max(best, space.dist(u, v));
        u = phi(u);
        v = phi(v);
      }
      table[x * n + y] = best;
      table[y * n + x] = best;
    }
  }
  return FiniteMetricSpace({space.labels().begin(), space.labels().end()}, std::move(table),
                           "adapted(" + space.tag() + ")");
}

}  // namespace solenoid
