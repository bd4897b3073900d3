#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "solenoid/dynamics.hpp"
#include "solenoid/metric_core.hpp"

namespace solenoid {

/// Partition of the base points into minimal eps-clopen phi-invariant blocks.
///
/// Two points share a block when a chain of steps joins them, each step either
/// metric (distance <= eps) or dynamical (y = phi(x) or x = phi(y)). A proper
/// union of blocks is a disconnection witness E0 for the mapping torus at
/// resolution eps.
struct ComponentPartition {
  double resolution = 0.0;
  std::vector<std::vector<PointId>> blocks;  // each sorted; blocks ordered by smallest member
  bool invariant = true;                     // phi maps every block onto a block
  std::optional<std::vector<PointId>> witness;

  std::size_t component_count() const { return blocks.size(); }
  bool connected() const { return blocks.size() == 1; }
};

ComponentPartition invariant_components(const FiniteMetricSpace& space, const SelfMap& phi, double epsilon);

struct DenseOrbitResult {
  bool dense = false;
  double covering_fraction = 0.0;
  std::vector<PointId> orbit;      // distinct points phi^n(x0), |n| <= max_iter
  std::vector<PointId> uncovered;  // points farther than eps from the orbit
};

/// True iff every point lies within eps of {phi^n(x0) : |n| <= max_iter}.
DenseOrbitResult dense_orbit_check(const FiniteMetricSpace& space, const SelfMap& phi, PointId x0,
                                   double epsilon, std::int64_t max_iter);

}  // namespace solenoid
