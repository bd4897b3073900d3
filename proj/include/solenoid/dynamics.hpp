#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "solenoid/metric_core.hpp"

namespace solenoid {

enum class MapKind { kPermutationTable, kShiftMap, kGroupTranslation };

const char* to_string(MapKind kind);

/// An invertible self-map of {0, ..., n-1}, stored as forward and backward tables.
class SelfMap {
 public:
  SelfMap() = default;
  /// Throws InvalidInput unless `forward` is a bijection of {0, ..., n-1}.
  explicit SelfMap(std::vector<PointId> forward, MapKind kind = MapKind::kPermutationTable);

  static SelfMap identity(std::size_t n);
  /// x -> x + step (mod n).
  static SelfMap translation(std::size_t n, std::int64_t step);

  std::size_t size() const { return forward_.size(); }
  MapKind kind() const { return kind_; }

  PointId forward(PointId x) const { return forward_[x]; }
  PointId backward(PointId x) const { return backward_[x]; }
  PointId operator()(PointId x) const { return forward_[x]; }

  std::span<const PointId> forward_table() const { return forward_; }

  /// phi^n(x); negative n walks the backward table, n = 0 is the identity.
  PointId iterate(PointId x, std::int64_t n) const;

  SelfMap inverse() const;
  SelfMap power(std::int64_t n) const;

  /// Length of the cycle through x.
  std::size_t cycle_length(PointId x) const;
  /// lcm of all cycle lengths.
  std::uint64_t order() const;

  friend bool operator==(const SelfMap& a, const SelfMap& b) { return a.forward_ == b.forward_; }

 private:
  std::vector<PointId> forward_;
  std::vector<PointId> backward_;
  MapKind kind_ = MapKind::kPermutationTable;
};

inline PointId iterate(const SelfMap& phi, std::int64_t n, PointId x) { return phi.iterate(x, n); }

using PointPair = std::pair<PointId, PointId>;

/// C^{-1} d(x,y) <= d(phi x, phi y) <= C d(x,y) over all distinct pairs.
struct BilipschitzEstimate {
  double c_lower = 1.0;  // max of d(x,y) / d(phi x, phi y)
  double c_upper = 1.0;  // max of d(phi x, phi y) / d(x,y)
  double C = 1.0;
  std::vector<PointPair> lower_attaining;
  std::vector<PointPair> upper_attaining;
};

BilipschitzEstimate estimate_bilipschitz_constant(const FiniteMetricSpace& space, const SelfMap& phi);

struct IsometryCheck {
  bool is_isometry = true;
  PointPair worst_pair{0, 0};
  double worst_defect = 0.0;
};

IsometryCheck verify_isometry(const FiniteMetricSpace& space, const SelfMap& phi,
                              double tol = kDefaultTolerance);

/// d~(x, y) = max_n d(phi^n x, phi^n y). The supremum over n in Z is taken
/// over one period of the pair's joint orbit, which is exact for a permutation.
FiniteMetricSpace adapted_metric(const FiniteMetricSpace& space, const SelfMap& phi);

}  // namespace solenoid
