#pragma once

// Component ideals I_{G,Y}, admissible index sets, containment of their
// varieties, matrix points, and the two decomposition checks (variety cover by
// sampling, ideal equality by elimination on tiny graphs).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "robustci/ci.hpp"
#include "robustci/error.hpp"
#include "robustci/graph.hpp"
#include "robustci/ideal.hpp"
#include "robustci/polynomial.hpp"

namespace robustci {

struct ComponentIdeal {
  std::vector<Vertex> Y;
  RobustnessStructure components;        // components of G_Y
  std::vector<Polynomial> monomials;     // p_{ix}, x outside Y
  std::vector<Polynomial> binomials;     // f^{ij}_{xy}, x < y in one component, i < j

  std::vector<Polynomial> generators() const {
    auto g = monomials;
    g.insert(g.end(), binomials.begin(), binomials.end());
    return g;
  }
};

inline ComponentIdeal component_ideal(const InputGraph& g, int d0, std::vector<Vertex> y) {
  const VariableLayout lay(d0, g);
  ComponentIdeal ci;
  ci.Y = normalize_vertex_set(std::move(y), g.num_vertices());
  ci.components = components_of(g, ci.Y);
  for (Vertex x : complement_of(ci.Y, g.num_vertices()))
    for (int i = 1; i <= d0; ++i) ci.monomials.push_back(lay.p(i, x));
  for (const auto& block : ci.components.blocks())
    for (std::size_t a = 0; a < block.size(); ++a)
      for (std::size_t b = a + 1; b < block.size(); ++b)
        for (int i = 1; i <= d0; ++i)
          for (int j = i + 1; j <= d0; ++j) ci.binomials.push_back(edge_binomial(lay, i, j, block[a], block[b]));
  return ci;
}

// Every vertex outside Y merges components when added.
inline bool is_admissible_Y(const InputGraph& g, std::vector<Vertex> y) {
  return is_maximal(components_of(g, std::move(y)), g);
}

// V_{G,Y} contains V_{G,Z}.
inline bool containment(const InputGraph& g, std::vector<Vertex> y, std::vector<Vertex> z) {
  y = normalize_vertex_set(std::move(y), g.num_vertices());
  z = normalize_vertex_set(std::move(z), g.num_vertices());
  if (!std::includes(y.begin(), y.end(), z.begin(), z.end())) return false;
  const auto cy = components_of(g, y), cz = components_of(g, z);
  for (std::size_t a = 0; a < z.size(); ++a)
    for (std::size_t b = a + 1; b < z.size(); ++b)
      if (cy.block_of(z[a]) == cy.block_of(z[b]) && cz.block_of(z[a]) != cz.block_of(z[b])) return false;
  return true;
}

// d0 x |X| matrix stored column by column.
class MatrixPoint {
 public:
  MatrixPoint(int d0, std::size_t cols) : d0_(d0), cols_(cols), v_(static_cast<std::size_t>(d0) * cols, Rational(0)) {
    if (d0 < 1) throw input_error("matrix needs at least one row");
  }

  int rows() const { return d0_; }
  std::size_t cols() const { return cols_; }
  Rational& at(int i, Vertex x) { return v_.at(x * static_cast<std::size_t>(d0_) + static_cast<std::size_t>(i - 1)); }
  const Rational& at(int i, Vertex x) const {
    return v_.at(x * static_cast<std::size_t>(d0_) + static_cast<std::size_t>(i - 1));
  }
  std::span<const Rational> column(Vertex x) const {
    return std::span<const Rational>(v_).subspan(x * static_cast<std::size_t>(d0_), static_cast<std::size_t>(d0_));
  }
  void set_column(Vertex x, const std::vector<Rational>& c) {
    for (int i = 1; i <= d0_; ++i) at(i, x) = c.at(static_cast<std::size_t>(i - 1));
  }
  bool column_is_zero(Vertex x) const {
    const auto c = column(x);
    return std::all_of(c.begin(), c.end(), [](const Rational& q) { return q == 0; });
  }
  std::vector<Vertex> support() const {
    std::vector<Vertex> s;
    for (Vertex x = 0; x < cols_; ++x)
      if (!column_is_zero(x)) s.push_back(x);
    return s;
  }
  std::string str() const {
    std::string s = "[";
    for (Vertex x = 0; x < cols_; ++x) {
      s += x ? ", (" : "(";
      for (int i = 1; i <= d0_; ++i) s += (i > 1 ? "," : "") + to_string(at(i, x));
      s += ")";
    }
    return s + "]";
  }

 private:
  int d0_;
  std::size_t cols_;
  std::vector<Rational> v_;
};

inline void require_shape(const MatrixPoint& p, const InputGraph& g) {
  if (p.cols() != g.num_vertices()) throw input_error("matrix column count does not match the graph");
}

inline bool point_in_VGY(const MatrixPoint& p, const InputGraph& g, std::vector<Vertex> y) {
  require_shape(p, g);
  y = normalize_vertex_set(std::move(y), g.num_vertices());
  for (Vertex x : complement_of(y, g.num_vertices()))
    if (!p.column_is_zero(x)) return false;
  const auto comps = components_of(g, y);
  for (const auto& block : comps.blocks())
    for (std::size_t a = 0; a < block.size(); ++a)
      for (std::size_t b = a + 1; b < block.size(); ++b)
        if (!proportional(p.column(block[a]), p.column(block[b]))) return false;
  return true;
}

inline bool point_in_VG(const MatrixPoint& p, const InputGraph& g) {
  require_shape(p, g);
  for (const auto& e : g.edges())
    if (!proportional(p.column(e.u), p.column(e.v))) return false;
  return true;
}

// Columns normalised to sum 1 as a joint table; the total must be positive.
inline JointDistribution to_distribution(const MatrixPoint& p, const StateSpace& space) {
  if (p.cols() != space.num_configs() || p.rows() != space.output_size())
    throw input_error("matrix shape does not match the state space");
  JointDistribution d(space);
  Rational total = 0;
  for (Vertex x = 0; x < p.cols(); ++x)
    for (int i = 1; i <= p.rows(); ++i) {
      if (p.at(i, x) < 0) throw input_error("negative matrix entry");
      d.at(i, x) = p.at(i, x);
      total += p.at(i, x);
    }
  if (total == 0) throw input_error("zero matrix has no normalisation");
  d.scale(1 / total);
  return d;
}

// Column v on the component of x in G_Y, w on the rest of Y, zero elsewhere,
// with v = (1,...,1) and w = (1,2,...,d0).
inline MatrixPoint vw_point(const InputGraph& g, int d0, std::vector<Vertex> y, Vertex x) {
  if (d0 < 2) throw input_error("two independent columns need d0 >= 2");
  y = normalize_vertex_set(std::move(y), g.num_vertices());
  if (!std::binary_search(y.begin(), y.end(), x)) throw input_error("anchor vertex must lie in Y");
  const auto comps = components_of(g, y);
  std::vector<Rational> v(static_cast<std::size_t>(d0), Rational(1)), w;
  for (int i = 1; i <= d0; ++i) w.push_back(Rational(i));
  MatrixPoint p(d0, g.num_vertices());
  for (Vertex z : y) p.set_column(z, comps.block_of(z) == comps.block_of(x) ? v : w);
  return p;
}

inline MatrixPoint indicator_point(const InputGraph& g, int d0, const std::vector<Vertex>& y) {
  MatrixPoint p(d0, g.num_vertices());
  for (Vertex z : normalize_vertex_set(y, g.num_vertices()))
    for (int i = 1; i <= d0; ++i) p.at(i, z) = 1;
  return p;
}

// A point of V_{G,Z} outside V_{G,Y}, drawn from the indicator of Z and the
// v/w points anchored in Z; none when V_{G,Y} contains V_{G,Z}.
inline std::optional<MatrixPoint> non_containment_witness(const InputGraph& g, int d0, const std::vector<Vertex>& y,
                                                          const std::vector<Vertex>& z) {
  auto outside = [&](const MatrixPoint& p) { return point_in_VGY(p, g, z) && !point_in_VGY(p, g, y); };
  if (auto p = indicator_point(g, d0, z); outside(p)) return p;
  for (Vertex x : normalize_vertex_set(z, g.num_vertices()))
    if (auto p = vw_point(g, d0, z, x); outside(p)) return p;
  return std::nullopt;
}

// All admissible Y, in canonical structure order.
inline std::vector<std::vector<Vertex>> admissible_sets(const InputGraph& g, const EnumerationOptions& opts = {}) {
  std::vector<std::vector<Vertex>> out;
  for (const auto& s : enumerate_maximal_structures(g, opts)) out.push_back(s.support());
  return out;
}

struct UnionReport {
  std::size_t trials = 0;
  std::size_t in_variety = 0;
  std::vector<std::string> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};

namespace detail {
inline Rational random_nonzero(std::mt19937_64& rng) {
  const long num = static_cast<long>(rng() % 7) - 3;
  const long den = static_cast<long>(rng() % 3) + 1;
  Rational q(num == 0 ? 4 : num, den);
  q.canonicalize();
  return q;
}
}  // namespace detail

inline constexpr std::size_t kUnionVertexLimit = 12;

// Sampled check of V_G = union of V_{G,Y} over admissible Y. Points are either
// built per support pattern with proportional columns on each component (so
// they lie in V_G by construction), or generic with random zero columns.
inline UnionReport verify_union_decomposition(const InputGraph& g, int d0, std::size_t trials, std::uint64_t seed) {
  if (g.num_vertices() > kUnionVertexLimit)
    throw resource_error("union decomposition check is limited to " + std::to_string(kUnionVertexLimit) + " vertices");
  if (d0 < 2) throw input_error("d0 must be >= 2");
  const auto admissible = admissible_sets(g, {.cap_vertices = kUnionVertexLimit});
  const std::size_t n = g.num_vertices();
  UnionReport rep;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (t + 1)));
    std::vector<Vertex> support;
    for (Vertex x = 0; x < n; ++x)
      if (rng() % 4 != 0) support.push_back(x);
    MatrixPoint p(d0, n);
    const bool structured = t % 2 == 0;
    if (structured) {
      const auto comps = components_of(g, support);
      for (const auto& block : comps.blocks()) {
        std::vector<Rational> dir;
        for (int i = 0; i < d0; ++i) dir.push_back(detail::random_nonzero(rng));
        for (Vertex x : block) {
          const Rational s = detail::random_nonzero(rng);
          for (int i = 1; i <= d0; ++i) p.at(i, x) = s * dir[static_cast<std::size_t>(i - 1)];
        }
      }
    } else {
      for (Vertex x : support)
        for (int i = 1; i <= d0; ++i) p.at(i, x) = detail::random_nonzero(rng);
    }
    const bool in_vg = point_in_VG(p, g);
    bool in_some = false;
    for (const auto& y : admissible)
      if (point_in_VGY(p, g, y)) {
        in_some = true;
        break;
      }
    if (in_vg) ++rep.in_variety;
    if (structured && !in_vg) rep.counterexamples.push_back("structured point outside V_G: " + p.str());
    if (in_vg != in_some)
      rep.counterexamples.push_back(std::string(in_vg ? "point of V_G in no admissible component: "
                                                      : "point outside V_G in an admissible component: ") +
                                    p.str());
    if (in_vg && !point_in_VGY(p, g, p.support()))
      rep.counterexamples.push_back("point of V_G outside the component of its own support: " + p.str());
    ++rep.trials;
  }
  return rep;
}

inline constexpr std::size_t kIntersectionVertexLimit = 3;

struct PrimaryReport {
  std::vector<std::vector<Vertex>> admissible;
  bool non_containment = true;
  bool membership = true;
  std::optional<bool> intersection_equality;  // empty when skipped
  std::vector<std::string> counterexamples;
  bool ok() const { return non_containment && membership && intersection_equality.value_or(true); }
};

inline PrimaryReport verify_primary_decomposition(const InputGraph& g, int d0, const GroebnerCaps& caps = {},
                                                  const EnumerationOptions& opts = {}) {
  if (d0 < 2) throw input_error("d0 must be >= 2");
  PrimaryReport rep;
  rep.admissible = admissible_sets(g, opts);
  auto set_str = [&](const std::vector<Vertex>& y) {
    std::string s = "{";
    for (std::size_t k = 0; k < y.size(); ++k) s += (k ? "," : "") + format_config(g.space().config(y[k]));
    return s + "}";
  };

  for (std::size_t a = 0; a < rep.admissible.size(); ++a)
    for (std::size_t b = 0; b < rep.admissible.size(); ++b)
      if (a != b && containment(g, rep.admissible[a], rep.admissible[b])) {
        rep.non_containment = false;
        rep.counterexamples.push_back("V_{G," + set_str(rep.admissible[a]) + "} contains V_{G," +
                                      set_str(rep.admissible[b]) + "}");
      }

  const auto edges = edge_polynomials(g, d0);
  std::vector<std::vector<Polynomial>> component_gens;
  for (const auto& y : rep.admissible) {
    component_gens.push_back(component_ideal(g, d0, y).generators());
    const auto gb = buchberger(component_gens.back(), caps);
    for (const auto& f : edges)
      if (!reduce(f, gb, caps).is_zero()) {
        rep.membership = false;
        rep.counterexamples.push_back("edge generator outside I_{G," + set_str(y) + "}");
        break;
      }
  }

  if (g.num_vertices() <= kIntersectionVertexLimit && d0 == 2 && !component_gens.empty()) {
    std::vector<Polynomial> cur = buchberger(component_gens.front(), caps);
    for (std::size_t k = 1; k < component_gens.size(); ++k) cur = intersect_ideals(cur, component_gens[k], caps);
    cur = reduce_basis(std::move(cur), caps);
    const auto expected = buchberger(edges, caps);
    rep.intersection_equality = cur == expected;
    if (!*rep.intersection_equality)
      rep.counterexamples.push_back("intersection of component ideals differs from I_G");
  }
  return rep;
}

}  // namespace robustci
