#pragma once

// Binomial edge ideals of an input graph with d0 rows: generators, admissible
// paths, antitone labellings and the explicit reduced Groebner basis.
//
// Unknown p_{i,x} (row i in 1..d0, vertex x) is variable (i-1)*|X| + x, so
// p_{ix} > p_{jy} iff i > j, or i = j and x > y.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "robustci/error.hpp"
#include "robustci/graph.hpp"
#include "robustci/model.hpp"
#include "robustci/polynomial.hpp"

namespace robustci {

class VariableLayout {
 public:
  VariableLayout(int d0, StateSpace space) : d0_(d0), space_(std::move(space)) {
    if (d0_ < 2) throw input_error("d0 must be >= 2");
  }
  VariableLayout(int d0, const InputGraph& g) : VariableLayout(d0, g.space()) {}

  int rows() const { return d0_; }
  std::size_t cols() const { return space_.num_configs(); }
  const StateSpace& space() const { return space_; }

  Var var(int i, Vertex x) const {
    if (i < 1 || i > d0_) throw input_error("row index out of range");
    if (x >= cols()) throw input_error("column index out of range");
    return static_cast<Var>(static_cast<std::size_t>(i - 1) * cols() + x);
  }
  int row(Var v) const { return static_cast<int>(v / cols()) + 1; }
  Vertex col(Var v) const { return v % cols(); }

  // p[i;x1,...,xn]
  std::string name(Var v) const {
    const Config x = space_.config(col(v));
    std::string s = "p[" + std::to_string(row(v)) + ";";
    for (std::size_t k = 0; k < x.size(); ++k) s += (k ? "," : "") + std::to_string(x[k]);
    return s + "]";
  }
  VarNamer namer() const {
    return [this](Var v) { return name(v); };
  }

  Polynomial p(int i, Vertex x) const { return Polynomial::var(var(i, x)); }

 private:
  int d0_;
  StateSpace space_;
};

// f^{ij}_{xy} = p_{ix} p_{jy} - p_{iy} p_{jx}, stored with i < j and x < y.
struct EdgeBinomial {
  int i = 1, j = 2;
  Vertex x = 0, y = 1;

  Polynomial polynomial(const VariableLayout& lay) const {
    return lay.p(i, x) * lay.p(j, y) - lay.p(i, y) * lay.p(j, x);
  }
  auto operator<=>(const EdgeBinomial&) const = default;
};

// f^{ij}_{xy} for arbitrary order of indices; antisymmetric in both pairs.
inline Polynomial edge_binomial(const VariableLayout& lay, int i, int j, Vertex x, Vertex y) {
  return lay.p(i, x) * lay.p(j, y) - lay.p(i, y) * lay.p(j, x);
}

inline std::vector<EdgeBinomial> edge_generators(const InputGraph& g, int d0) {
  if (d0 < 2) throw input_error("d0 must be >= 2");
  std::vector<EdgeBinomial> out;
  for (const auto& e : g.edges())
    for (int i = 1; i <= d0; ++i)
      for (int j = i + 1; j <= d0; ++j) out.push_back({i, j, e.u, e.v});
  return out;
}

inline std::vector<Polynomial> edge_polynomials(const InputGraph& g, int d0) {
  const VariableLayout lay(d0, g);
  std::vector<Polynomial> out;
  for (const auto& b : edge_generators(g, d0)) out.push_back(b.polynomial(lay));
  return out;
}

using Path = std::vector<Vertex>;

// No chord between non-consecutive path vertices; for an injective path this is
// the same as no order-preserving sub-sequence of the interior giving an x-y path.
inline bool is_induced_path(const InputGraph& g, const Path& path) {
  for (std::size_t a = 0; a < path.size(); ++a)
    for (std::size_t b = a + 2; b < path.size(); ++b)
      if (g.adjacent(path[a], path[b])) return false;
  return true;
}

inline bool is_admissible_path(const InputGraph& g, const Path& path) {
  if (path.size() < 2) return false;
  const Vertex x = path.front(), y = path.back();
  if (x >= y) return false;
  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    if (!g.adjacent(path[k], path[k + 1])) return false;
  auto sorted = path;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (std::size_t k = 1; k + 1 < path.size(); ++k)
    if (!(path[k] < x || path[k] > y)) return false;
  return is_induced_path(g, path);
}

namespace detail {
inline void extend_paths(const InputGraph& g, Vertex y, Path& cur, std::vector<std::uint8_t>& used,
                         std::vector<Path>& out, std::size_t cap) {
  const Vertex x = cur.front(), last = cur.back();
  for (Vertex v : g.neighbors(last)) {
    if (used[v]) continue;
    if (v != y && !(v < x || v > y)) continue;
    bool chord = false;
    for (std::size_t a = 0; a + 1 < cur.size() && !chord; ++a) chord = g.adjacent(cur[a], v);
    if (chord) continue;
    cur.push_back(v);
    if (v == y) {
      out.push_back(cur);
      if (out.size() > cap) throw resource_error("admissible path cap of " + std::to_string(cap) + " exceeded");
    } else {
      used[v] = 1;
      extend_paths(g, y, cur, used, out, cap);
      used[v] = 0;
    }
    cur.pop_back();
  }
}
}  // namespace detail

inline std::vector<Path> enumerate_admissible_paths(const InputGraph& g, Vertex x, Vertex y,
                                                    std::size_t cap = 1000000) {
  if (x >= y) throw input_error("admissible paths need x < y in canonical order");
  if (y >= g.num_vertices()) throw input_error("path endpoint outside the vertex set");
  std::vector<Path> out;
  Path cur{x};
  std::vector<std::uint8_t> used(g.num_vertices(), 0);
  used[x] = 1;
  detail::extend_paths(g, y, cur, used, out, cap);
  std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

// Which positions the antitone condition ranges over: 0..r, or 1..r as
// literally displayed in the source definition.
enum class AntitoneRange { EndpointInclusive, Literal };

using Labeling = std::vector<int>;

inline bool is_antitone(const Path& path, const Labeling& kappa, AntitoneRange range = AntitoneRange::EndpointInclusive) {
  if (kappa.size() != path.size()) throw input_error("labeling length must match the path");
  const std::size_t first = range == AntitoneRange::EndpointInclusive ? 0 : 1;
  for (std::size_t s = first; s < path.size(); ++s)
    for (std::size_t t = first; t < path.size(); ++t)
      if (path[s] < path[t] && kappa[s] < kappa[t]) return false;
  return true;
}

inline bool is_strictly_antitone(const Path& path, const Labeling& kappa,
                                 AntitoneRange range = AntitoneRange::EndpointInclusive) {
  return is_antitone(path, kappa, range) && kappa.front() > kappa.back();
}

inline std::vector<Labeling> enumerate_strict_antitone(const Path& path, int d0,
                                                       AntitoneRange range = AntitoneRange::EndpointInclusive) {
  if (d0 < 1) throw input_error("d0 must be positive");
  if (path.size() < 2) throw input_error("path needs at least one edge");
  const std::size_t first = range == AntitoneRange::EndpointInclusive ? 0 : 1;
  std::vector<Labeling> out;
  Labeling k(path.size(), 1);
  auto rec = [&](auto&& self, std::size_t pos) -> void {
    if (pos == path.size()) {
      if (k.front() > k.back()) out.push_back(k);
      return;
    }
    for (int label = 1; label <= d0; ++label) {
      k[pos] = label;
      bool ok = true;
      if (pos >= first)
        for (std::size_t s = first; s < pos && ok; ++s)
          ok = !(path[s] < path[pos] && k[s] < label) && !(path[pos] < path[s] && label < k[s]);
      if (ok) self(self, pos + 1);
    }
  };
  rec(rec, 0);
  return out;
}

struct GroebnerElement {
  Path path;
  Labeling kappa;
  Polynomial polynomial;
};

// u * f^{kappa(r) kappa(0)}_{x0 xr} with u the product of interior p_{kappa(k) x_k}.
inline Polynomial groebner_polynomial(const VariableLayout& lay, const Path& path, const Labeling& kappa) {
  Polynomial u = Polynomial::constant(1);
  for (std::size_t k = 1; k + 1 < path.size(); ++k) u = u * lay.p(kappa[k], path[k]);
  return u * edge_binomial(lay, kappa.back(), kappa.front(), path.front(), path.back());
}

struct GroebnerSetOptions {
  AntitoneRange range = AntitoneRange::EndpointInclusive;
  std::size_t max_elements = 200000;
};

// Canonical order (x, y, path length, path, kappa); duplicates by polynomial dropped.
inline std::vector<GroebnerElement> groebner_set(const InputGraph& g, int d0, const GroebnerSetOptions& opts = {}) {
  if (d0 < 2) throw input_error("d0 must be >= 2");
  const VariableLayout lay(d0, g);
  std::vector<GroebnerElement> out;
  std::set<Polynomial> seen;
  for (Vertex x = 0; x < g.num_vertices(); ++x)
    for (Vertex y = x + 1; y < g.num_vertices(); ++y)
      for (const Path& path : enumerate_admissible_paths(g, x, y, opts.max_elements))
        for (const Labeling& kappa : enumerate_strict_antitone(path, d0, opts.range)) {
          Polynomial f = groebner_polynomial(lay, path, kappa);
          if (!seen.insert(f).second) continue;
          out.push_back({path, kappa, std::move(f)});
          if (out.size() > opts.max_elements)
            throw resource_error("Groebner set cap of " + std::to_string(opts.max_elements) + " elements exceeded");
        }
  return out;
}

inline std::vector<Polynomial> polynomials_of(const std::vector<GroebnerElement>& elems) {
  std::vector<Polynomial> out;
  for (const auto& e : elems) out.push_back(e.polynomial);
  return out;
}

// Monic, and no initial term divides any term of another element.
inline bool is_reduced(const std::vector<Polynomial>& basis) {
  for (const auto& p : basis)
    if (p.is_zero() || p.lc() != 1) return false;
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (a == b) continue;
      for (const auto& t : basis[b].terms())
        if (basis[a].lm().divides(t.m)) return false;
    }
  return true;
}

inline bool is_reduced(const std::vector<GroebnerElement>& basis) { return is_reduced(polynomials_of(basis)); }

// prod_{k=0}^{r} p_{kappa(k) x_k}
inline Monomial path_monomial(const VariableLayout& lay, const Path& path, const Labeling& kappa) {
  std::vector<Monomial::Factor> f;
  for (std::size_t k = 0; k < path.size(); ++k) f.push_back({lay.var(kappa[k], path[k]), 1});
  return Monomial(std::move(f));
}

// For a labelling that is not antitone along a walk, an element of the
// Groebner set whose initial term divides the full path monomial. Built from a
// violating pair of minimal span: shortcut the walk between them greedily
// (always jump to the farthest later position adjacent to the current one) and
// exchange the two endpoint labels.
inline std::optional<GroebnerElement> find_reduction_witness(const InputGraph& g, int d0, const Path& walk,
                                                             const Labeling& kappa,
                                                             AntitoneRange range = AntitoneRange::EndpointInclusive) {
  if (walk.size() != kappa.size()) throw input_error("labeling length must match the walk");
  for (int k : kappa)
    if (k < 1 || k > d0) throw input_error("label outside 1..d0");
  for (std::size_t k = 0; k + 1 < walk.size(); ++k)
    if (!g.adjacent(walk[k], walk[k + 1])) throw input_error("walk uses a non-edge");
  if (is_antitone(walk, kappa, range)) return std::nullopt;

  const std::size_t first = range == AntitoneRange::EndpointInclusive ? 0 : 1;
  struct Violation {
    std::size_t a, b;
  };
  std::vector<Violation> viol;
  for (std::size_t s = first; s < walk.size(); ++s)
    for (std::size_t t = s + 1; t < walk.size(); ++t)
      if ((walk[s] < walk[t] && kappa[s] < kappa[t]) || (walk[t] < walk[s] && kappa[t] < kappa[s]))
        viol.push_back({s, t});
  std::stable_sort(viol.begin(), viol.end(), [](const Violation& p, const Violation& q) { return p.b - p.a < q.b - q.a; });

  const VariableLayout lay(d0, g);
  const Monomial target = path_monomial(lay, walk, kappa);
  for (const auto& [a, b] : viol) {
    std::vector<std::size_t> pos{a};
    while (pos.back() != b) {
      std::size_t next = pos.back() + 1;
      for (std::size_t q = b; q > pos.back(); --q)
        if (g.adjacent(walk[pos.back()], walk[q])) {
          next = q;
          break;
        }
      pos.push_back(next);
    }
    if (walk[a] > walk[b]) std::reverse(pos.begin(), pos.end());
    Path path;
    Labeling lab;
    for (std::size_t q : pos) {
      path.push_back(walk[q]);
      lab.push_back(kappa[q]);
    }
    std::swap(lab.front(), lab.back());
    if (!is_admissible_path(g, path) || !is_strictly_antitone(path, lab, range)) continue;
    GroebnerElement e{path, lab, groebner_polynomial(lay, path, lab)};
    if (e.polynomial.lm().divides(target)) return e;
  }
  throw contract_error("no reduction witness found for a non-antitone labelling");
}

// One element per line, terms in descending order.
inline std::string format_basis_text(const std::vector<Polynomial>& basis, const VariableLayout& lay) {
  std::string s;
  for (const auto& p : basis) s += format_polynomial(p, lay.namer()) + "\n";
  return s;
}

}  // namespace robustci
