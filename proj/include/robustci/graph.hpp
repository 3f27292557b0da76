#pragma once

// The graph G_R on input configurations, robustness structures (connected
// components of induced subgraphs), maximality and enumeration of maximal
// structures, plus the structural checks used for k = 1 and the binary cube.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robustci/error.hpp"
#include "robustci/model.hpp"
#include "robustci/parallel.hpp"

namespace robustci {

struct Edge {
  Vertex u;  // u < v
  Vertex v;
  std::optional<SpecPair> witness;  // a generating (R, y) when built from a spec
};

class InputGraph {
 public:
  InputGraph(StateSpace space, std::vector<Edge> edges) : space_(std::move(space)) {
    const std::size_t n = space_.num_configs();
    adjacency_.assign(n * n, 0);
    neighbors_.assign(n, {});
    for (auto& e : edges) {
      if (e.u == e.v) throw input_error("self-loop at vertex " + format_config(space_.config(e.u)));
      if (e.u >= n || e.v >= n) throw input_error("edge endpoint outside the vertex set");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    for (auto& e : edges) {
      if (adjacency_[e.u * n + e.v]) continue;
      adjacency_[e.u * n + e.v] = adjacency_[e.v * n + e.u] = 1;
      neighbors_[e.u].push_back(e.v);
      neighbors_[e.v].push_back(e.u);
      edges_.push_back(std::move(e));
    }
    for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
  }

  const StateSpace& space() const { return space_; }
  std::size_t num_vertices() const { return neighbors_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return neighbors_.at(v); }
  bool adjacent(Vertex a, Vertex b) const { return adjacency_.at(a * num_vertices() + b) != 0; }

  // True iff the stored witness pins both endpoints to the same partial configuration.
  bool witness_valid(const Edge& e) const {
    if (!e.witness) return false;
    const Config xu = space_.config(e.u), xv = space_.config(e.v);
    return restrict(xu, e.witness->R) == e.witness->y && restrict(xv, e.witness->R) == e.witness->y;
  }

 private:
  StateSpace space_;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::vector<Vertex>> neighbors_;
  std::vector<Edge> edges_;
};

// Edge x ~ x' iff some (R, y) in the spec has x|_R = x'|_R = y. The witness is
// the first such pair in canonical spec order.
inline InputGraph build_graph(const RobustnessSpec& spec, const StateSpace& space) {
  const std::size_t n = space.num_configs();
  std::vector<Config> configs(n);
  for (Vertex v = 0; v < n; ++v) configs[v] = space.config(v);
  std::vector<std::int64_t> witness_of(n * n, -1);
  for (std::size_t p = 0; p < spec.size(); ++p) {
    const auto& pair = spec.pairs()[p];
    if (!space.is_partial_config(pair.R, pair.y)) throw input_error("spec does not match the state space");
    std::vector<Vertex> group;
    for (Vertex v = 0; v < n; ++v)
      if (restrict(configs[v], pair.R) == pair.y) group.push_back(v);
    for (std::size_t a = 0; a < group.size(); ++a)
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        auto& w = witness_of[group[a] * n + group[b]];
        if (w < 0) w = static_cast<std::int64_t>(p);
      }
  }
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      if (const auto w = witness_of[a * n + b]; w >= 0)
        edges.push_back({a, b, spec.pairs()[static_cast<std::size_t>(w)]});
  return InputGraph(space, std::move(edges));
}

// Graph on m abstract vertices, modelled as a single input node with m letters.
inline InputGraph make_simple_graph(std::size_t m, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  std::vector<Edge> es;
  for (auto [a, b] : edges) es.push_back({a, b, std::nullopt});
  return InputGraph(StateSpace(2, {static_cast<int>(m)}), std::move(es));
}

class RobustnessStructure {
 public:
  RobustnessStructure() = default;

  // Canonicalizes: sorted blocks, ordered by minimal element. Blocks must be
  // nonempty and pairwise disjoint.
  explicit RobustnessStructure(std::vector<std::vector<Vertex>> blocks) : blocks_(std::move(blocks)) {
    for (auto& b : blocks_) {
      if (b.empty()) throw input_error("robustness structure has an empty block");
      std::sort(b.begin(), b.end());
      if (std::adjacent_find(b.begin(), b.end()) != b.end())
        throw input_error("robustness structure block repeats a configuration");
    }
    std::sort(blocks_.begin(), blocks_.end());
    const auto sup = support();
    if (std::adjacent_find(sup.begin(), sup.end()) != sup.end())
      throw input_error("robustness structure blocks are not disjoint");
  }

  const std::vector<std::vector<Vertex>>& blocks() const { return blocks_; }
  std::size_t num_blocks() const { return blocks_.size(); }

  std::vector<Vertex> support() const {
    std::vector<Vertex> s;
    for (const auto& b : blocks_) s.insert(s.end(), b.begin(), b.end());
    std::sort(s.begin(), s.end());
    return s;
  }

  // Index of the block holding x, if any.
  std::optional<std::size_t> block_of(Vertex x) const {
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      if (std::binary_search(blocks_[i].begin(), blocks_[i].end(), x)) return i;
    return std::nullopt;
  }

  auto operator<=>(const RobustnessStructure&) const = default;

 private:
  std::vector<std::vector<Vertex>> blocks_;
};

inline std::vector<Vertex> normalize_vertex_set(std::vector<Vertex> y, std::size_t num_vertices) {
  std::sort(y.begin(), y.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  if (!y.empty() && y.back() >= num_vertices) throw input_error("vertex set reaches outside the graph");
  return y;
}

// Connected components of the subgraph induced by Y.
inline RobustnessStructure components_of(const InputGraph& graph, std::vector<Vertex> y) {
  y = normalize_vertex_set(std::move(y), graph.num_vertices());
  std::vector<std::uint8_t> in(graph.num_vertices(), 0), seen(graph.num_vertices(), 0);
  for (Vertex v : y) in[v] = 1;
  std::vector<std::vector<Vertex>> blocks;
  for (Vertex start : y) {
    if (seen[start]) continue;
    std::vector<Vertex> block{start}, stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : graph.neighbors(v))
        if (in[w] && !seen[w]) {
          seen[w] = 1;
          block.push_back(w);
          stack.push_back(w);
        }
    }
    blocks.push_back(std::move(block));
  }
  return RobustnessStructure(std::move(blocks));
}

inline std::vector<Vertex> complement_of(const std::vector<Vertex>& y, std::size_t num_vertices) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < num_vertices; ++v)
    if (!std::binary_search(y.begin(), y.end(), v)) out.push_back(v);
  return out;
}

inline void require_components(const RobustnessStructure& s, const InputGraph& graph) {
  if (components_of(graph, s.support()) != s)
    throw input_error("structure blocks are not the connected components of the induced subgraph");
}

// Condition (2): adding any outside vertex strictly lowers the component count.
inline bool is_maximal(const RobustnessStructure& s, const InputGraph& graph) {
  require_components(s, graph);
  const auto sup = s.support();
  const std::size_t base = s.num_blocks();
  for (Vertex x : complement_of(sup, graph.num_vertices())) {
    auto bigger = sup;
    bigger.push_back(x);
    if (components_of(graph, std::move(bigger)).num_blocks() >= base) return false;
  }
  return true;
}

// Condition (1): every outside vertex has neighbours in two different blocks.
inline bool maximality_by_edges(const RobustnessStructure& s, const InputGraph& graph) {
  require_components(s, graph);
  for (Vertex x : complement_of(s.support(), graph.num_vertices())) {
    std::optional<std::size_t> first;
    bool split = false;
    for (Vertex w : graph.neighbors(x)) {
      const auto b = s.block_of(w);
      if (!b) continue;
      if (!first) first = b;
      else if (*first != *b) {
        split = true;
        break;
      }
    }
    if (!split) return false;
  }
  return true;
}

namespace detail {

// Bitmask view of a graph with at most 64 vertices.
struct MaskGraph {
  std::size_t n = 0;
  std::vector<std::uint64_t> adj;

  explicit MaskGraph(const InputGraph& g) : n(g.num_vertices()), adj(g.num_vertices(), 0) {
    if (n > 64) throw resource_error("bitmask enumeration supports at most 64 vertices");
    for (const auto& e : g.edges()) {
      adj[e.u] |= std::uint64_t{1} << e.v;
      adj[e.v] |= std::uint64_t{1} << e.u;
    }
  }

  // Writes the component masks of the subgraph induced by y; returns their count.
  std::size_t components(std::uint64_t y, std::uint64_t* out) const {
    std::size_t count = 0;
    std::uint64_t rest = y;
    while (rest) {
      std::uint64_t comp = rest & (~rest + 1), frontier = comp;
      while (frontier) {
        std::uint64_t next = 0;
        for (std::uint64_t f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
        next &= y & ~comp;
        comp |= next;
        frontier = next;
      }
      out[count++] = comp;
      rest &= ~comp;
    }
    return count;
  }

  bool is_maximal(std::uint64_t y) const {
    std::uint64_t comps[64];
    const std::size_t c = components(y, comps);
    const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    for (std::uint64_t out = all & ~y; out; out &= out - 1) {
      const std::uint64_t nb = adj[static_cast<std::size_t>(std::countr_zero(out))] & y;
      int touched = 0;
      for (std::size_t i = 0; i < c && touched < 2; ++i)
        if (comps[i] & nb) ++touched;
      if (touched < 2) return false;
    }
    return true;
  }

  RobustnessStructure structure(std::uint64_t y) const {
    std::uint64_t comps[64];
    const std::size_t c = components(y, comps);
    std::vector<std::vector<Vertex>> blocks;
    for (std::size_t i = 0; i < c; ++i) {
      std::vector<Vertex> b;
      for (std::uint64_t m = comps[i]; m; m &= m - 1) b.push_back(static_cast<Vertex>(std::countr_zero(m)));
      blocks.push_back(std::move(b));
    }
    return RobustnessStructure(std::move(blocks));
  }
};

// Depth-first search over in/out decisions in vertex order. A branch is cut
// when some excluded vertex can no longer end up touching two different final
// components; the test is a necessary condition only, and leaves are checked
// with the full predicate.
class PrunedSearch {
 public:
  explicit PrunedSearch(const MaskGraph& g) : g_(g) {}

  std::vector<std::uint64_t> run() {
    found_.clear();
    recurse(0, 0, 0);
    return found_;
  }

 private:
  bool feasible(std::uint64_t in, std::uint64_t out, std::uint64_t undecided) const {
    std::uint64_t comps[64];
    const std::size_t c = g_.components(in, comps);
    for (std::uint64_t o = out; o; o &= o - 1) {
      const auto x = static_cast<std::size_t>(std::countr_zero(o));
      const std::uint64_t nb = g_.adj[x] & in;
      std::uint64_t touched_mask = 0;
      int touched = 0;
      for (std::size_t i = 0; i < c && touched < 2; ++i)
        if (comps[i] & nb) {
          ++touched;
          touched_mask = comps[i];
        }
      if (touched >= 2) continue;
      const std::uint64_t cand = g_.adj[x] & undecided;
      if (touched == 1) {
        bool ok = false;
        for (std::uint64_t u = cand; u && !ok; u &= u - 1)
          ok = (g_.adj[static_cast<std::size_t>(std::countr_zero(u))] & touched_mask) == 0;
        if (!ok) return false;
      } else {
        bool ok = false;
        for (std::uint64_t u = cand; u && !ok; u &= u - 1) {
          const auto a = static_cast<std::size_t>(std::countr_zero(u));
          ok = (cand & ~g_.adj[a] & ~(std::uint64_t{1} << a)) != 0;
        }
        if (!ok) return false;
      }
    }
    return true;
  }

  void recurse(std::size_t v, std::uint64_t in, std::uint64_t out) {
    const std::uint64_t all = g_.n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g_.n) - 1;
    const std::uint64_t undecided = all & ~in & ~out;
    if (!feasible(in, out, undecided)) return;
    if (v == g_.n) {
      if (g_.is_maximal(in)) found_.push_back(in);
      return;
    }
    const std::uint64_t bit = std::uint64_t{1} << v;
    recurse(v + 1, in | bit, out);
    recurse(v + 1, in, out | bit);
  }

  const MaskGraph& g_;
  std::vector<std::uint64_t> found_;
};

}  // namespace detail

enum class EnumerationStrategy { Exhaustive, Pruned };

struct EnumerationOptions {
  std::size_t cap_vertices = 20;
  unsigned threads = 1;
  EnumerationStrategy strategy = EnumerationStrategy::Exhaustive;
};

inline constexpr std::size_t kExhaustiveVertexCeiling = 30;
inline constexpr std::size_t kPrunedVertexCeiling = 64;

// All maximal structures of the graph, canonically ordered. The exhaustive
// strategy tests every subset; the pruned strategy explores the same space
// with a sound cut and is meant for larger, dense graphs.
inline std::vector<RobustnessStructure> enumerate_maximal_structures(const InputGraph& graph,
                                                                     const EnumerationOptions& opts = {}) {
  const std::size_t n = graph.num_vertices();
  const std::size_t ceiling =
      opts.strategy == EnumerationStrategy::Exhaustive ? kExhaustiveVertexCeiling : kPrunedVertexCeiling;
  const std::size_t cap = std::min(opts.cap_vertices, ceiling);
  if (n > cap)
    throw resource_error("maximal-structure enumeration capped at " + std::to_string(cap) + " vertices, graph has " +
                         std::to_string(n));
  const detail::MaskGraph mg(graph);
  std::vector<std::uint64_t> masks;
  if (opts.strategy == EnumerationStrategy::Exhaustive) {
    const std::size_t total = std::size_t{1} << n;
    const unsigned threads = std::max(1u, opts.threads);
    std::vector<std::vector<std::uint64_t>> per_chunk(threads);
    parallel_chunks(total, threads, [&](std::size_t lo, std::size_t hi, std::size_t chunk) {
      auto& out = per_chunk[chunk];
      for (std::size_t y = lo; y < hi; ++y)
        if (mg.is_maximal(y)) out.push_back(y);
    });
    for (auto& c : per_chunk) masks.insert(masks.end(), c.begin(), c.end());
  } else {
    masks = detail::PrunedSearch(mg).run();
  }
  std::vector<RobustnessStructure> out;
  out.reserve(masks.size());
  for (auto y : masks) out.push_back(mg.structure(y));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Recomputes components of the same support in another graph on the same
// vertices (typically a sparser G_{R_l}, l > k).
inline RobustnessStructure coarsen_structure(const RobustnessStructure& s, const InputGraph& other_graph) {
  return components_of(other_graph, s.support());
}

// Second condition of the product form for maximal 1-robustness structures.
// Lines: for every j, every assignment of the other n-1 coordinates has a
// completion in the support (the condition as displayed). Cover: every letter
// of every coordinate appears in some block (what the argument establishes).
// The two agree for n = 2.
enum class ProductFormRule { Lines, CoordinateCover };

// Every block is the product of its coordinate projections, plus the chosen
// covering condition.
inline bool check_product_form(const RobustnessStructure& s, const StateSpace& space,
                               ProductFormRule rule = ProductFormRule::Lines) {
  const int n = space.num_inputs();
  const auto sup = s.support();
  std::vector<std::vector<std::uint8_t>> covered(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) covered[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(space.input_size(i + 1)), 0);
  for (const auto& block : s.blocks()) {
    std::vector<std::vector<int>> proj(static_cast<std::size_t>(n));
    for (Vertex v : block) {
      const Config x = space.config(v);
      for (int i = 0; i < n; ++i) {
        proj[static_cast<std::size_t>(i)].push_back(x[static_cast<std::size_t>(i)]);
        covered[static_cast<std::size_t>(i)][static_cast<std::size_t>(x[static_cast<std::size_t>(i)] - 1)] = 1;
      }
    }
    std::size_t product = 1;
    for (auto& p : proj) {
      std::sort(p.begin(), p.end());
      p.erase(std::unique(p.begin(), p.end()), p.end());
      product *= p.size();
    }
    // a block always sits inside its projection product, so equal sizes mean equality
    if (product != block.size()) return false;
  }
  if (rule == ProductFormRule::CoordinateCover) {
    for (const auto& c : covered)
      if (std::find(c.begin(), c.end(), 0) != c.end()) return false;
    return true;
  }
  std::vector<std::uint8_t> in(space.num_configs(), 0);
  for (Vertex v : sup) in[v] = 1;
  for (int j = 1; j <= n; ++j) {
    const Subset others = complement(Subset{j}, n);
    for (const Config& fixed : space.partial_configs(others)) {
      bool hit = false;
      for (int letter = 1; letter <= space.input_size(j) && !hit; ++letter) {
        Config x(static_cast<std::size_t>(n));
        for (std::size_t t = 0; t < others.size(); ++t) x[static_cast<std::size_t>(others[t] - 1)] = fixed[t];
        x[static_cast<std::size_t>(j - 1)] = letter;
        hit = in[space.index_of(x)] != 0;
      }
      if (!hit) return false;
    }
  }
  return true;
}

// Complement categories for maximal structures of the binary 3-cube graph.
enum class CubeComplementKind { Empty, TwoPairPlane, ParityClass, VertexCut, Unclassified };

inline std::string to_string(CubeComplementKind k) {
  switch (k) {
    case CubeComplementKind::Empty: return "empty";
    case CubeComplementKind::TwoPairPlane: return "plane-two-pairs";
    case CubeComplementKind::ParityClass: return "parity-class";
    case CubeComplementKind::VertexCut: return "vertex-cut";
    case CubeComplementKind::Unclassified: return "unclassified";
  }
  return "?";
}

inline bool is_binary_cube_graph(const InputGraph& g) {
  const auto& sp = g.space();
  if (sp.num_inputs() != 3 || sp.num_configs() != 8) return false;
  for (Vertex a = 0; a < 8; ++a)
    for (Vertex b = a + 1; b < 8; ++b)
      if (g.adjacent(a, b) != (std::popcount(a ^ b) == 1)) return false;
  return true;
}

// Every category predicate is evaluated independently; the result is
// Unclassified unless exactly one of them holds.
inline CubeComplementKind classify_cube_complement(const InputGraph& g, const std::vector<Vertex>& removed) {
  const auto c = normalize_vertex_set(removed, g.num_vertices());
  const auto kept = complement_of(c, g.num_vertices());
  auto parity = [&](Vertex v) {
    int s = 0;
    for (int letter : g.space().config(v)) s += letter;
    return s % 2;
  };
  int hits = 0;
  CubeComplementKind kind = CubeComplementKind::Unclassified;
  auto mark = [&](bool cond, CubeComplementKind k) {
    if (cond) {
      ++hits;
      kind = k;
    }
  };
  mark(c.empty(), CubeComplementKind::Empty);
  const bool same_parity =
      c.size() == 4 && std::all_of(c.begin(), c.end(), [&](Vertex v) { return parity(v) == parity(c.front()); });
  mark(same_parity, CubeComplementKind::ParityClass);
  bool two_pairs = false;
  if (c.size() == 4) {
    const auto rest = components_of(g, kept);
    two_pairs = rest.num_blocks() == 2 && rest.blocks()[0].size() == 2 && rest.blocks()[1].size() == 2;
  }
  mark(two_pairs, CubeComplementKind::TwoPairPlane);
  bool cut = false;
  if (c.size() == 3)
    for (Vertex v : kept) cut = cut || g.neighbors(v) == c;
  mark(cut, CubeComplementKind::VertexCut);
  return hits == 1 ? kind : CubeComplementKind::Unclassified;
}

}  // namespace robustci
