#pragma once

// Conditional-independence statements on exact tables, classification of a
// distribution's robustness structure, the block-wise generating
// construction, and robust functions.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "robustci/error.hpp"
#include "robustci/graph.hpp"
#include "robustci/model.hpp"
#include "robustci/rational.hpp"

namespace robustci {

// p(x0, x) p(x0', x') - p(x0, x') p(x0', x) != 0
struct Minor {
  int x0 = 0, x0p = 0;
  Vertex x = 0, xp = 0;
  Rational lhs, rhs;  // p(x0,x)p(x0',x') and p(x0,x')p(x0',x)
};

// Both columns lie on a common line through the origin (zero is proportional
// to everything). Returns the first non-vanishing 2x2 minor otherwise.
inline std::optional<Minor> proportionality_witness(std::span<const Rational> v, std::span<const Rational> w) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      Rational lhs = v[i] * w[j], rhs = v[j] * w[i];
      if (lhs != rhs) return Minor{static_cast<int>(i + 1), static_cast<int>(j + 1), 0, 0, lhs, rhs};
    }
  return std::nullopt;
}

inline bool proportional(std::span<const Rational> v, std::span<const Rational> w) {
  return !proportionality_witness(v, w).has_value();
}

struct CiResult {
  bool holds = true;
  std::optional<Minor> witness;
};

// X0 _||_ X_{[n]\R} | X_R = y: all 2x2 minors over columns with x|_R = y vanish.
inline CiResult check_ci_statement(const JointDistribution& dist, const Subset& r, const Config& y) {
  const auto& space = dist.space();
  if (!space.is_partial_config(r, y)) throw input_error("CI statement: y is not a configuration on R");
  std::vector<Vertex> fibre;
  for (Vertex v = 0; v < space.num_configs(); ++v)
    if (restrict(space.config(v), r) == y) fibre.push_back(v);
  for (std::size_t a = 0; a < fibre.size(); ++a)
    for (std::size_t b = a + 1; b < fibre.size(); ++b)
      if (auto m = proportionality_witness(dist.column(fibre[a]), dist.column(fibre[b]))) {
        m->x = fibre[a];
        m->xp = fibre[b];
        return {false, m};
      }
  return {};
}

struct RobustnessReport {
  bool robust = true;
  std::optional<SpecPair> failing_statement;
  std::optional<Minor> witness;
};

inline RobustnessReport is_robust(const JointDistribution& dist, const RobustnessSpec& spec) {
  for (const auto& pair : spec.pairs()) {
    auto r = check_ci_statement(dist, pair.R, pair.y);
    if (!r.holds) return {false, pair, r.witness};
  }
  return {};
}

// Edge form: columns proportional across every edge of G_spec.
inline bool is_robust_by_edges(const JointDistribution& dist, const InputGraph& graph) {
  for (const auto& e : graph.edges())
    if (!proportional(dist.column(e.u), dist.column(e.v))) return false;
  return true;
}

inline RobustnessStructure classify_structure(const JointDistribution& dist, const InputGraph& graph) {
  return components_of(graph, dist.support());
}

// Parameters of p(x0, x) = mu(Z) lambda_Z(x) p_Z(x0) for x in block Z.
struct StructureParams {
  std::vector<Rational> mu;                   // one per block
  std::vector<std::vector<Rational>> lambda;  // per block, aligned with the block's sorted vertices
  std::vector<std::vector<Rational>> output;  // per block, length d0
};

namespace detail {
inline std::vector<Rational> normalized_draws(std::size_t count, std::mt19937_64& rng, int modulus) {
  std::vector<Rational> v(count);
  Rational total = 0;
  for (auto& q : v) {
    q = Rational(static_cast<long>(1 + rng() % static_cast<std::uint64_t>(modulus)), modulus);
    q.canonicalize();
    total += q;
  }
  for (auto& q : v) q /= total;
  return v;
}
}  // namespace detail

// Draws k/M with k in 1..M for every weight, then normalizes; strictly positive.
inline StructureParams sample_params(const RobustnessStructure& s, int d0, std::mt19937_64& rng, int modulus = 97) {
  StructureParams p;
  p.mu = detail::normalized_draws(s.num_blocks(), rng, modulus);
  for (const auto& b : s.blocks()) {
    p.lambda.push_back(detail::normalized_draws(b.size(), rng, modulus));
    p.output.push_back(detail::normalized_draws(static_cast<std::size_t>(d0), rng, modulus));
  }
  return p;
}

inline JointDistribution build_from_structure(const RobustnessStructure& s, const StructureParams& params,
                                              const StateSpace& space) {
  const std::size_t nb = s.num_blocks();
  if (params.mu.size() != nb || params.lambda.size() != nb || params.output.size() != nb)
    throw input_error("structure parameters do not match the number of blocks");
  auto sums_to_one = [](const std::vector<Rational>& v) {
    Rational t = 0;
    for (const auto& q : v) t += q;
    return t == 1;
  };
  if (nb && !sums_to_one(params.mu)) throw input_error("mu must sum to 1");
  JointDistribution dist(space);
  for (std::size_t z = 0; z < nb; ++z) {
    const auto& block = s.blocks()[z];
    if (params.mu[z] <= 0) throw input_error("mu must be strictly positive on every block");
    if (params.lambda[z].size() != block.size() || !sums_to_one(params.lambda[z]))
      throw input_error("lambda must be a distribution on each block");
    if (static_cast<int>(params.output[z].size()) != space.output_size() || !sums_to_one(params.output[z]))
      throw input_error("output distributions must have length d0 and sum to 1");
    for (const auto& q : params.output[z])
      if (q < 0) throw input_error("output distributions must be nonnegative");
    for (std::size_t t = 0; t < block.size(); ++t) {
      if (params.lambda[z][t] <= 0) throw input_error("lambda must be strictly positive on every configuration");
      if (block[t] >= space.num_configs()) throw input_error("structure vertex outside the state space");
      for (int x0 = 1; x0 <= space.output_size(); ++x0)
        dist.at(x0, block[t]) = params.mu[z] * params.lambda[z][t] * params.output[z][static_cast<std::size_t>(x0 - 1)];
    }
  }
  return dist;
}

// supp p~ equals the union of blocks and columns are proportional within each block.
inline bool membership_in_pb(const JointDistribution& dist, const RobustnessStructure& s, const InputGraph& graph) {
  require_components(s, graph);
  if (dist.support() != s.support()) return false;
  for (const auto& b : s.blocks())
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j)
        if (!proportional(dist.column(b[i]), dist.column(b[j]))) return false;
  return true;
}

// A labelled function on a subset of configurations; labels are opaque.
using RobustFunction = std::map<Vertex, std::string>;

// Constant on each connected component of the graph induced by its domain.
inline bool is_robust_function(const RobustFunction& f, const InputGraph& graph) {
  std::vector<Vertex> domain;
  for (const auto& [x, _] : f) domain.push_back(x);
  const auto comps = components_of(graph, domain);
  for (const auto& block : comps.blocks())
    for (Vertex x : block)
      if (f.at(x) != f.at(block.front())) return false;
  return true;
}

// min over fully covered R (every y in X_R present) of prod_{i in R} d_i.
inline std::size_t image_bound(const RobustnessSpec& spec, const StateSpace& space) {
  std::map<Subset, std::size_t> counts;
  for (const auto& p : spec.pairs()) ++counts[p.R];
  std::optional<std::size_t> best;
  for (const auto& [r, c] : counts) {
    const std::size_t full = space.num_partial_configs(r);
    if (c == full && (!best || full < *best)) best = full;
  }
  if (!best) throw input_error("bound undefined for this spec: no index set R is fully covered");
  return *best;
}

}  // namespace robustci
