#include "solenoid/connectedness.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "solenoid/errors.hpp"

namespace solenoid {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

void check_inputs(const FiniteMetricSpace& space, const SelfMap& phi, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidInput("resolution epsilon must be positive");
  if (phi.size() != space.size()) throw InvalidInput("map and space sizes differ");
}

}  // namespace

ComponentPartition invariant_components(const FiniteMetricSpace& space, const SelfMap& phi, double epsilon) {
  check_inputs(space, phi, epsilon);
  const std::size_t n = space.size();
  DisjointSets sets(n);
  for (PointId x = 0; x < n; ++x) {
    sets.unite(x, phi(x));
    for (PointId y = x + 1; y < n; ++y) {
      if (space.dist(x, y) <= epsilon) sets.unite(x, y);
    }
  }

  ComponentPartition out;
  out.resolution = epsilon;
  std::map<std::size_t, std::size_t> block_of_root;
  std::vector<std::size_t> block_of(n);
  for (PointId x = 0; x < n; ++x) {
    const auto [it, fresh] = block_of_root.emplace(sets.find(x), out.blocks.size());
    if (fresh) out.blocks.emplace_back();
    out.blocks[it->second].push_back(x);
    block_of[x] = it->second;
  }

  // phi(block) must be exactly one block.
  for (const auto& block : out.blocks) {
    std::set<PointId> image;
    for (PointId x : block) image.insert(phi(x));
    const auto& target = out.blocks[block_of[*image.begin()]];
    if (!std::equal(image.begin(), image.end(), target.begin(), target.end())) out.invariant = false;
  }

  if (out.blocks.size() > 1) out.witness = out.blocks.front();
  return out;
}

DenseOrbitResult dense_orbit_check(const FiniteMetricSpace& space, const SelfMap& phi, PointId x0, double epsilon,
                                   std::int64_t max_iter) {
  check_inputs(space, phi, epsilon);
  if (max_iter < 1) throw InvalidInput("max_iter must be at least 1");
  if (x0 >= space.size()) throw InvalidInput("orbit start point out of range");

  std::set<PointId> orbit{x0};
  PointId fwd = x0, bwd = x0;
  for (std::int64_t i = 0; i < max_iter; ++i) {
    fwd = phi.forward(fwd);
    bwd = phi.backward(bwd);
    if (fwd == x0) break;  // the orbit has closed up
    orbit.insert(fwd);
    orbit.insert(bwd);
  }

  DenseOrbitResult out;
  out.orbit.assign(orbit.begin(), orbit.end());
  for (PointId p = 0; p < space.size(); ++p) {
    const bool covered =
        std::any_of(orbit.begin(), orbit.end(), [&](PointId c) { return space.dist(c, p) <= epsilon; });
    if (!covered) out.uncovered.push_back(p);
  }
  out.covering_fraction =
      static_cast<double>(space.size() - out.uncovered.size()) / static_cast<double>(space.size());
  out.dense = out.uncovered.empty();
  if (out.dense && !invariant_components(space, phi, epsilon).connected()) {
    throw std::logic_error("dense orbit without a single invariant component");
  }
  return out;
}

}  // namespace solenoid
