#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solenoid/dynamics.hpp"
#include "solenoid/metric_core.hpp"

namespace solenoid {

using Symbol = std::uint8_t;

/// Ordered set of at least two distinct single-character tokens.
class Alphabet {
 public:
  /// Tokens '0', '1', ... (then 'a', 'b', ... past ten symbols).
  explicit Alphabet(std::size_t size = 2);
  explicit Alphabet(std::string tokens);

  std::size_t size() const { return tokens_.size(); }
  char token(Symbol s) const { return tokens_[s]; }
  Symbol index_of(char token) const;
  const std::string& tokens() const { return tokens_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::string tokens_;
};

/// A purely periodic doubly-infinite sequence x with x_j = cells[j mod p].
///
/// Always stored with its minimal period, so equality of values is equality
/// of sequences. Index 0 of the sequence is cells[0].
class PeriodicSequence {
 public:
  PeriodicSequence(std::vector<Symbol> cells, std::size_t alphabet_size);

  static PeriodicSequence constant(Symbol s, std::size_t alphabet_size);

  std::size_t period() const { return cells_.size(); }
  std::size_t alphabet_size() const { return alphabet_size_; }
  std::span<const Symbol> cells() const { return cells_; }
  Symbol at(std::int64_t j) const;

  /// "p:c0c1...c_{p-1}"
  std::string to_string(const Alphabet& alphabet) const;
  static PeriodicSequence parse(std::string_view text, const Alphabet& alphabet);

  friend bool operator==(const PeriodicSequence&, const PeriodicSequence&) = default;
  friend auto operator<=>(const PeriodicSequence&, const PeriodicSequence&) = default;

 private:
  std::size_t alphabet_size_ = 2;
  std::vector<Symbol> cells_;
};

/// Parameters of the ultrametric d_a on the full shift over an alphabet.
class ShiftConfig {
 public:
  ShiftConfig(Alphabet alphabet, double a);

  const Alphabet& alphabet() const { return alphabet_; }
  double a() const { return a_; }

 private:
  Alphabet alphabet_;
  double a_;
};

inline constexpr std::int64_t kInfiniteDepth = std::numeric_limits<std::int64_t>::max();

/// Largest n >= 0 with x_j = y_j for all -n+1 <= j <= n, or kInfiniteDepth
/// when x = y.
std::int64_t agreement_depth(const PeriodicSequence& x, const PeriodicSequence& y);

struct ShiftDistance {
  double value = 0.0;
  /// Exact exponent n with value = a^n; empty when x = y (value 0).
  std::optional<std::int64_t> exponent;
};

ShiftDistance d_a(const PeriodicSequence& x, const PeriodicSequence& y, const ShiftConfig& cfg);

/// phi^k(x): the sequence j -> x_{j-k}.
PeriodicSequence shift(const PeriodicSequence& x, std::int64_t k);

/// Sample points inside the closed d_a-ball of radius a^n about center.
std::vector<PeriodicSequence> ball_points(const PeriodicSequence& center, std::int64_t n,
                                          std::span<const PeriodicSequence> sample);

struct EquicontinuityWitness {
  PeriodicSequence y;
  std::int64_t k = 0;
};

/// y agrees with x except at the indices congruent to n+1 modulo
/// lcm(period(x), 2n+4), and k = -(n+1). Then d_a(x, y) = a^n while
/// d_a(phi^k x, phi^k y) = 1, so no neighbourhood of x is equicontinuous.
EquicontinuityWitness equicontinuity_witness(const PeriodicSequence& x, std::int64_t n,
                                             const ShiftConfig& cfg);

/// A finite shift-invariant set of periodic points together with its metric
/// space and shift map.
class ShiftSample {
 public:
  /// Throws InvalidInput if the points are not closed under the shift or
  /// contain duplicates.
  ShiftSample(ShiftConfig cfg, std::vector<PeriodicSequence> points);

  /// Every sequence whose period divides max_period, in lexicographic order of
  /// the length-max_period word x_0 ... x_{max_period-1}.
  static ShiftSample all_periodic(ShiftConfig cfg, std::size_t max_period);

  const ShiftConfig& config() const { return cfg_; }
  std::span<const PeriodicSequence> points() const { return points_; }
  const PeriodicSequence& point(PointId i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  std::optional<PointId> find(const PeriodicSequence& x) const;

  FiniteMetricSpace metric_space() const;
  SelfMap shift_map() const;

 private:
  ShiftConfig cfg_;
  std::vector<PeriodicSequence> points_;
  std::map<PeriodicSequence, PointId> index_;
};

}  // namespace solenoid
