#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "solenoid/dynamics.hpp"
#include "solenoid/metric_core.hpp"
#include "solenoid/symbolic_space.hpp"

namespace testing {

using Rng = std::mt19937_64;

inline std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

inline solenoid::FiniteMetricSpace from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> table;
  for (const auto& r : rows) table.insert(table.end(), r.begin(), r.end());
  return solenoid::FiniteMetricSpace(index_labels(rows.size()), table);
}

/// Points 0..n-1 of the real line with |i - j|.
inline solenoid::FiniteMetricSpace line(std::size_t n) {
  return solenoid::FiniteMetricSpace::from_function(index_labels(n), [](std::size_t i, std::size_t j) {
    return std::abs(static_cast<double>(i) - static_cast<double>(j));
  });
}

/// Shortest-path metric of a complete graph with integer weights 1..max_w.
/// Integer distances keep every triangle comparison exact.
inline solenoid::FiniteMetricSpace random_graph_metric(std::size_t n, Rng& rng, int max_w = 10) {
  std::uniform_int_distribution<int> weight(1, max_w);
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = weight(rng);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
    }
  }
  return solenoid::FiniteMetricSpace(index_labels(n), d, "graph");
}

/// Distinct random words with d = 2^{-(common prefix length)}: an ultrametric.
inline solenoid::FiniteMetricSpace random_ultrametric(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<int> letter(0, 2);
  std::vector<std::string> words;
  while (words.size() < n) {
    std::string w;
    for (int i = 0; i < 6; ++i) w += static_cast<char>('a' + letter(rng));
    if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
  }
  return solenoid::FiniteMetricSpace::from_function(words, [&](std::size_t i, std::size_t j) {
    if (i == j) return 0.0;
    std::size_t k = 0;
    while (words[i][k] == words[j][k]) ++k;
    return std::ldexp(1.0, -static_cast<int>(k));
  });
}

inline solenoid::SelfMap random_permutation(std::size_t n, Rng& rng) {
  std::vector<solenoid::PointId> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return solenoid::SelfMap(p);
}

inline solenoid::PeriodicSequence sequence(const std::string& text) {
  return solenoid::PeriodicSequence::parse(text, solenoid::Alphabet(2));
}

inline solenoid::PeriodicSequence random_sequence(Rng& rng, std::size_t alphabet, std::size_t max_period) {
  std::uniform_int_distribution<std::size_t> period(1, max_period);
  std::uniform_int_distribution<int> symbol(0, static_cast<int>(alphabet) - 1);
  std::vector<solenoid::Symbol> cells(period(rng));
  for (auto& c : cells) c = static_cast<solenoid::Symbol>(symbol(rng));
  return solenoid::PeriodicSequence(cells, alphabet);
}

/// Largest n with x_j = y_j on -n+1..n, by direct comparison up to `cap`.
inline std::int64_t naive_depth(const solenoid::PeriodicSequence& x, const solenoid::PeriodicSequence& y,
                                std::int64_t cap = 400) {
  for (std::int64_t n = 1; n <= cap; ++n) {
    for (std::int64_t j = -n + 1; j <= n; ++j) {
      if (x.at(j) != y.at(j)) return n - 1;
    }
  }
  return solenoid::kInfiniteDepth;
}

}  // namespace testing
