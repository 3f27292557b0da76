#pragma once

// State spaces, input configurations, robustness specifications and exact
// joint distributions. Letters are 1-based throughout; input indices are
// 1-based as well (input i has alphabet {1..d_i}).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robustci/error.hpp"
#include "robustci/rational.hpp"

namespace robustci {

using Config = std::vector<int>;  // full or partial configuration, 1-based letters
using Subset = std::vector<int>;  // sorted, duplicate-free, 1-based input indices
using Vertex = std::size_t;       // position of a configuration in canonical order

inline std::string format_config(const Config& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

inline Subset complement(const Subset& r, int n) {
  Subset out;
  for (int i = 1; i <= n; ++i)
    if (!std::binary_search(r.begin(), r.end(), i)) out.push_back(i);
  return out;
}

// All subsets of {1..n}, ordered by size and then lexicographically.
inline std::vector<Subset> all_subsets(int n) {
  std::vector<Subset> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Subset s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i + 1);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Subset& a, const Subset& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

class StateSpace {
 public:
  StateSpace(int d0, std::vector<int> d) : d0_(d0), d_(std::move(d)) {
    if (d0_ < 2) throw input_error("output alphabet size d0 must be >= 2, got " + std::to_string(d0_));
    if (d_.empty()) throw input_error("need at least one input node");
    num_configs_ = 1;
    for (int di : d_) {
      if (di < 1) throw input_error("input alphabet sizes must be >= 1, got " + std::to_string(di));
      num_configs_ *= static_cast<std::size_t>(di);
      if (num_configs_ > (std::size_t{1} << 32)) throw input_error("state space too large");
    }
  }

  int output_size() const { return d0_; }
  int num_inputs() const { return static_cast<int>(d_.size()); }
  const std::vector<int>& input_sizes() const { return d_; }
  int input_size(int i) const { return d_.at(static_cast<std::size_t>(i - 1)); }
  std::size_t num_configs() const { return num_configs_; }

  // Lexicographic order with coordinate 1 most significant is exactly
  // mixed-radix order, so vertex indices are canonical positions.
  Config config(Vertex v) const {
    if (v >= num_configs_) throw input_error("vertex index out of range");
    Config x(d_.size());
    for (std::size_t i = d_.size(); i-- > 0;) {
      const auto di = static_cast<std::size_t>(d_[i]);
      x[i] = static_cast<int>(v % di) + 1;
      v /= di;
    }
    return x;
  }

  bool contains(const Config& x) const {
    if (x.size() != d_.size()) return false;
    for (std::size_t i = 0; i < d_.size(); ++i)
      if (x[i] < 1 || x[i] > d_[i]) return false;
    return true;
  }

  Vertex index_of(const Config& x) const {
    if (!contains(x)) throw input_error("configuration " + format_config(x) + " not in state space");
    Vertex v = 0;
    for (std::size_t i = 0; i < d_.size(); ++i) v = v * static_cast<Vertex>(d_[i]) + static_cast<Vertex>(x[i] - 1);
    return v;
  }

  bool is_valid_subset(const Subset& r) const {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] < 1 || r[i] > num_inputs()) return false;
      if (i && r[i] <= r[i - 1]) return false;
    }
    return true;
  }

  bool is_partial_config(const Subset& r, const Config& y) const {
    if (!is_valid_subset(r) || r.size() != y.size()) return false;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (y[i] < 1 || y[i] > input_size(r[i])) return false;
    return true;
  }

  std::size_t num_partial_configs(const Subset& r) const {
    std::size_t c = 1;
    for (int i : r) c *= static_cast<std::size_t>(input_size(i));
    return c;
  }

  // Configurations on R in lexicographic order.
  std::vector<Config> partial_configs(const Subset& r) const {
    std::vector<Config> out;
    Config y(r.size(), 1);
    const std::size_t total = num_partial_configs(r);
    out.reserve(total);
    for (std::size_t c = 0; c < total; ++c) {
      out.push_back(y);
      for (std::size_t i = r.size(); i-- > 0;) {
        if (++y[i] <= input_size(r[i])) break;
        y[i] = 1;
      }
    }
    return out;
  }

  bool operator==(const StateSpace&) const = default;

 private:
  int d0_;
  std::vector<int> d_;
  std::size_t num_configs_ = 1;
};

// (x_i)_{i in R}; R must be a valid subset for x's length.
inline Config restrict(const Config& x, const Subset& r) {
  Config out;
  out.reserve(r.size());
  for (int i : r) {
    if (i < 1 || static_cast<std::size_t>(i) > x.size())
      throw input_error("restriction index " + std::to_string(i) + " out of range");
    out.push_back(x[static_cast<std::size_t>(i - 1)]);
  }
  return out;
}

struct SpecPair {
  Subset R;
  Config y;
  auto operator<=>(const SpecPair&) const = default;
};

// A set of (R, y) pairs, stored sorted and deduplicated.
class RobustnessSpec {
 public:
  RobustnessSpec() = default;

  static RobustnessSpec from_pairs(std::vector<SpecPair> pairs, const StateSpace& space) {
    for (const auto& p : pairs) {
      if (!space.is_valid_subset(p.R))
        throw input_error("spec pair has an invalid index set R (must be sorted, distinct, within 1..n)");
      if (!space.is_partial_config(p.R, p.y))
        throw input_error("spec pair has y " + format_config(p.y) + " not a configuration on R");
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    RobustnessSpec s;
    s.pairs_ = std::move(pairs);
    return s;
  }

  const std::vector<SpecPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool contains(const SpecPair& p) const { return std::binary_search(pairs_.begin(), pairs_.end(), p); }
  bool operator==(const RobustnessSpec&) const = default;

 private:
  std::vector<SpecPair> pairs_;
};

// R_k as a pair set: every (R, y) with |R| >= k and y ranging over X_R.
inline RobustnessSpec make_uniform_spec(int k, const StateSpace& space) {
  const int n = space.num_inputs();
  if (k < 0 || k > n)
    throw input_error("uniform spec level k=" + std::to_string(k) + " outside 0.." + std::to_string(n));
  std::vector<SpecPair> pairs;
  for (const Subset& r : all_subsets(n)) {
    if (static_cast<int>(r.size()) < k) continue;
    for (Config& y : space.partial_configs(r)) pairs.push_back({r, std::move(y)});
  }
  return RobustnessSpec::from_pairs(std::move(pairs), space);
}

// Exact table p(x0, x). Column p~_x is contiguous.
class JointDistribution {
 public:
  explicit JointDistribution(StateSpace space)
      : space_(std::move(space)),
        cells_(space_.num_configs() * static_cast<std::size_t>(space_.output_size()), Rational(0)) {}

  const StateSpace& space() const { return space_; }

  const Rational& at(int x0, Vertex x) const { return cells_.at(offset(x0, x)); }
  Rational& at(int x0, Vertex x) { return cells_.at(offset(x0, x)); }

  std::span<const Rational> column(Vertex x) const {
    const auto d0 = static_cast<std::size_t>(space_.output_size());
    return std::span<const Rational>(cells_).subspan(x * d0, d0);
  }

  bool column_is_zero(Vertex x) const {
    return std::all_of(column(x).begin(), column(x).end(), [](const Rational& q) { return q == 0; });
  }

  // supp p~ in canonical order
  std::vector<Vertex> support() const {
    std::vector<Vertex> out;
    for (Vertex x = 0; x < space_.num_configs(); ++x)
      if (!column_is_zero(x)) out.push_back(x);
    return out;
  }

  Rational total() const {
    Rational s = 0;
    for (const auto& q : cells_) s += q;
    return s;
  }

  void scale(const Rational& factor) {
    for (auto& q : cells_) q *= factor;
  }

  bool operator==(const JointDistribution&) const = default;

 private:
  std::size_t offset(int x0, Vertex x) const {
    if (x0 < 1 || x0 > space_.output_size()) throw input_error("output letter out of range");
    if (x >= space_.num_configs()) throw input_error("input configuration index out of range");
    return x * static_cast<std::size_t>(space_.output_size()) + static_cast<std::size_t>(x0 - 1);
  }

  StateSpace space_;
  std::vector<Rational> cells_;
};

struct DistributionViolation {
  enum class Kind { NegativeEntry, SumNotOne, OutOfRange };
  Kind kind;
  std::string message;
};

inline std::string to_string(DistributionViolation::Kind k) {
  switch (k) {
    case DistributionViolation::Kind::NegativeEntry: return "negative entry";
    case DistributionViolation::Kind::SumNotOne: return "sum != 1";
    case DistributionViolation::Kind::OutOfRange: return "out-of-range index";
  }
  return "?";
}

// Returns the first violated invariant, or nothing when the table is a distribution.
inline std::optional<DistributionViolation> validate_distribution(const JointDistribution& dist,
                                                                  const StateSpace& space) {
  if (!(dist.space() == space))
    return DistributionViolation{DistributionViolation::Kind::OutOfRange,
                                 "distribution shape does not match the state space"};
  for (Vertex x = 0; x < space.num_configs(); ++x)
    for (int x0 = 1; x0 <= space.output_size(); ++x0)
      if (dist.at(x0, x) < 0)
        return DistributionViolation{DistributionViolation::Kind::NegativeEntry,
                                     "negative entry at x0=" + std::to_string(x0) + ", x=" +
                                         format_config(space.config(x)) + ": " + to_string(dist.at(x0, x))};
  const Rational total = dist.total();
  if (total != 1)
    return DistributionViolation{DistributionViolation::Kind::SumNotOne, "entries sum to " + to_string(total)};
  return std::nullopt;
}

}  // namespace robustci
