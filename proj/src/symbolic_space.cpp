#include "solenoid/symbolic_space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include "solenoid/errors.hpp"

namespace solenoid {

namespace {

std::string default_tokens(std::size_t size) {
  static constexpr std::string_view kTokens = "0123456789abcdefghijklmnopqrstuvwxyz";
  if (size > kTokens.size()) throw InvalidInput("default alphabet supports at most 36 symbols");
  return std::string(kTokens.substr(0, size));
}

std::int64_t floor_mod(std::int64_t j, std::int64_t p) { return ((j % p) + p) % p; }

}  // namespace

Alphabet::Alphabet(std::size_t size) : Alphabet(default_tokens(size)) {}

Alphabet::Alphabet(std::string tokens) : tokens_(std::move(tokens)) {
  if (tokens_.size() < 2) throw InvalidInput("an alphabet needs at least two symbols");
  if (tokens_.size() > 256) throw InvalidInput("alphabet too large");
  std::string sorted = tokens_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidInput("alphabet tokens must be distinct");
  }
  if (tokens_.find(':') != std::string::npos) throw InvalidInput("':' is reserved by the text format");
}

Symbol Alphabet::index_of(char token) const {
  const auto pos = tokens_.find(token);
  if (pos == std::string::npos) throw InvalidInput(std::string("symbol '") + token + "' is not in the alphabet");
  return static_cast<Symbol>(pos);
}

PeriodicSequence::PeriodicSequence(std::vector<Symbol> cells, std::size_t alphabet_size)
    : alphabet_size_(alphabet_size), cells_(std::move(cells)) {
  if (cells_.empty()) throw InvalidInput("a periodic sequence needs period >= 1");
  if (alphabet_size_ < 2) throw InvalidInput("alphabet size must be at least 2");
  for (Symbol s : cells_) {
    if (s >= alphabet_size_) throw InvalidInput("sequence symbol outside the alphabet");
  }
  // Reduce to the minimal period: the smallest divisor d of p with
  // cells[i] == cells[i mod d] for all i.
  const std::size_t p = cells_.size();
  for (std::size_t d = 1; d < p; ++d) {
    if (p % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < p && repeats; ++i) repeats = cells_[i] == cells_[i - d];
    if (repeats) {
      cells_.resize(d);
      break;
    }
  }
}

PeriodicSequence PeriodicSequence::constant(Symbol s, std::size_t alphabet_size) {
  return PeriodicSequence({s}, alphabet_size);
}

Symbol PeriodicSequence::at(std::int64_t j) const {
  return cells_[static_cast<std::size_t>(floor_mod(j, static_cast<std::int64_t>(cells_.size())))];
}

std::string PeriodicSequence::to_string(const Alphabet& alphabet) const {
  if (alphabet.size() != alphabet_size_) throw InvalidInput("alphabet mismatch");
  std::string out = std::to_string(period()) + ":";
  for (Symbol s : cells_) out.push_back(alphabet.token(s));
  return out;
}

PeriodicSequence PeriodicSequence::parse(std::string_view text, const Alphabet& alphabet) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidInput("periodic sequence must look like 'p:cells'");
  std::size_t p = 0;
  const auto head = text.substr(0, colon);
  const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), p);
  if (ec != std::errc{} || ptr != head.data() + head.size()) throw InvalidInput("bad period in '" + std::string(text) + "'");
  const auto body = text.substr(colon + 1);
  if (body.size() != p) throw InvalidInput("period does not match cell count in '" + std::string(text) + "'");
  std::vector<Symbol> cells;
  cells.reserve(p);
  for (char c : body) cells.push_back(alphabet.index_of(c));
  return PeriodicSequence(std::move(cells), alphabet.size());
}

ShiftConfig::ShiftConfig(Alphabet alphabet, double a) : alphabet_(std::move(alphabet)), a_(a) {
  if (!(a > 0.0 && a < 1.0)) throw InvalidInput("shift metric parameter a must lie in (0, 1)");
}

std::int64_t agreement_depth(const PeriodicSequence& x, const PeriodicSequence& y) {
  if (x.alphabet_size() != y.alphabet_size()) throw InvalidInput("sequences over different alphabets");
  if (x == y) return kInfiniteDepth;
  // Minimal periods are canonical, so x != y means they differ somewhere in
  // every window of lcm(p_x, p_y) consecutive indices; the loop ends before
  // the window [-n, n+1] reaches that length.
  for (std::int64_t n = 0;; ++n) {
    if (x.at(n + 1) != y.at(n + 1) || x.at(-n) != y.at(-n)) return n;
  }
}

ShiftDistance d_a(const PeriodicSequence& x, const PeriodicSequence& y, const ShiftConfig& cfg) {
  if (x.alphabet_size() != cfg.alphabet().size()) throw InvalidInput("sequence alphabet differs from config");
  const std::int64_t depth = agreement_depth(x, y);
  if (depth == kInfiniteDepth) return {0.0, std::nullopt};
  return {std::pow(cfg.a(), static_cast<double>(depth)), depth};
}

PeriodicSequence shift(const PeriodicSequence& x, std::int64_t k) {
  const auto p = static_cast<std::int64_t>(x.period());
  std::vector<Symbol> cells(x.period());
  for (std::int64_t i = 0; i < p; ++i) cells[static_cast<std::size_t>(i)] = x.at(i - k);
  return PeriodicSequence(std::move(cells), x.alphabet_size());
}

std::vector<PeriodicSequence> ball_points(const PeriodicSequence& center, std::int64_t n,
                                          std::span<const PeriodicSequence> sample) {
  if (n < 0) throw InvalidInput("ball depth must be nonnegative");
  std::vector<PeriodicSequence> out;
  for (const auto& y : sample) {
    if (agreement_depth(center, y) >= n) out.push_back(y);
  }
  return out;
}

EquicontinuityWitness equicontinuity_witness(const PeriodicSequence& x, std::int64_t n, const ShiftConfig& cfg) {
  if (n < 1) throw InvalidInput("equicontinuity witness needs n >= 1");
  if (x.alphabet_size() != cfg.alphabet().size()) throw InvalidInput("sequence alphabet differs from config");
  const auto len = std::lcm(static_cast<std::int64_t>(x.period()), 2 * n + 4);
  std::vector<Symbol> cells(static_cast<std::size_t>(len));
  for (std::int64_t i = 0; i < len; ++i) cells[static_cast<std::size_t>(i)] = x.at(i);
  auto& defect = cells[static_cast<std::size_t>(n + 1)];
  defect = static_cast<Symbol>((defect + 1) % x.alphabet_size());
  return {PeriodicSequence(std::move(cells), x.alphabet_size()), -(n + 1)};
}

ShiftSample::ShiftSample(ShiftConfig cfg, std::vector<PeriodicSequence> points)
    : cfg_(std::move(cfg)), points_(std::move(points)) {
  for (PointId i = 0; i < points_.size(); ++i) {
    if (points_[i].alphabet_size() != cfg_.alphabet().size()) throw InvalidInput("sample point over a different alphabet");
    if (!index_.emplace(points_[i], i).second) throw InvalidInput("duplicate sample point");
  }
  for (const auto& x : points_) {
    if (!index_.contains(shift(x, 1))) {
      throw InvalidInput("sample is not closed under the shift: missing image of " + x.to_string(cfg_.alphabet()));
    }
  }
}

ShiftSample ShiftSample::all_periodic(ShiftConfig cfg, std::size_t max_period) {
  if (max_period < 1) throw InvalidInput("max_period must be at least 1");
  const std::size_t b = cfg.alphabet().size();
  const double total = std::pow(static_cast<double>(b), static_cast<double>(max_period));
  if (total > 1 << 16) throw InvalidInput("periodic sample would exceed 65536 points");
  std::vector<PeriodicSequence> points;
  std::vector<Symbol> word(max_period, 0);
  for (std::size_t count = 0; count < static_cast<std::size_t>(total); ++count) {
    points.emplace_back(word, b);
    // Odometer increment, most significant digit first.
    for (std::size_t i = max_period; i-- > 0;) {
      if (++word[i] < b) break;
      word[i] = 0;
    }
  }
  return ShiftSample(std::move(cfg), std::move(points));
}

std::optional<PointId> ShiftSample::find(const PeriodicSequence& x) const {
  const auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FiniteMetricSpace ShiftSample::metric_space() const {
  const std::size_t n = points_.size();
  std::vector<std::string> labels;
  labels.reserve(n);
  for (const auto& x : points_) labels.push_back(x.to_string(cfg_.alphabet()));
  std::vector<double> table(n * n, 0.0);
  ExactPowers exact{cfg_.a(), std::vector<std::int64_t>(n * n, kInfiniteExponent)};
  for (PointId i = 0; i < n; ++i) {
    for (PointId j = i + 1; j < n; ++j) {
      const ShiftDistance d = d_a(points_[i], points_[j], cfg_);
      table[i * n + j] = table[j * n + i] = d.value;
      exact.exponents[i * n + j] = exact.exponents[j * n + i] = d.exponent.value_or(kInfiniteExponent);
    }
  }
  return FiniteMetricSpace(std::move(labels), std::move(table),
                           "shift(B=" + std::to_string(cfg_.alphabet().size()) + ",a=" + std::to_string(cfg_.a()) + ")",
                           std::move(exact));
}

SelfMap ShiftSample::shift_map() const {
  std::vector<PointId> table(points_.size());
  for (PointId i = 0; i < points_.size(); ++i) table[i] = index_.at(shift(points_[i], 1));
  return SelfMap(std::move(table), MapKind::kShiftMap);
}

}  // namespace solenoid
