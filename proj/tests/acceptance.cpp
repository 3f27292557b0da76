// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "robustci/ci.hpp"
#include "robustci/decomp.hpp"
#include "robustci/gibbs.hpp"
#include "robustci/graph.hpp"
#include "robustci/ideal.hpp"

using namespace robustci;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

InputGraph uniform_graph(int k, std::vector<int> d, int d0 = 2) {
  StateSpace sp(d0, std::move(d));
  return build_graph(make_uniform_spec(k, sp), sp);
}

std::vector<int> binary(int n) { return std::vector<int>(static_cast<std::size_t>(n), 2); }

// Every labelled simple graph on m vertices.
std::vector<InputGraph> all_graphs(std::size_t m) {
  std::vector<std::pair<Vertex, Vertex>> slots;
  for (Vertex a = 0; a < m; ++a)
    for (Vertex b = a + 1; b < m; ++b) slots.push_back({a, b});
  std::vector<InputGraph> out;
  for (std::uint64_t sel = 0; sel < (std::uint64_t{1} << slots.size()); ++sel) {
    std::vector<std::pair<Vertex, Vertex>> es;
    for (std::size_t k = 0; k < slots.size(); ++k)
      if (sel >> k & 1) es.push_back(slots[k]);
    out.push_back(make_simple_graph(m, es));
  }
  return out;
}

bool connected(const InputGraph& g) {
  const std::uint64_t all = (std::uint64_t{1} << g.num_vertices()) - 1;
  return oracle::component_count(g, all) == 1;
}

std::vector<Polynomial> sorted(std::vector<Polynomial> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// 1. Cube taxonomy against a brute force written from configurations alone.
Outcome cube_taxonomy() {
  const auto cube = uniform_graph(2, binary(3));
  const auto all = enumerate_maximal_structures(cube);
  std::map<CubeComplementKind, int> counts;
  for (const auto& s : all) ++counts[classify_cube_complement(cube, complement_of(s.support(), 8))];

  const auto configs = oracle::all_configs(binary(3));
  auto comps = [&](unsigned mask) {
    oracle::UnionFind uf(8);
    for (unsigned a = 0; a < 8; ++a)
      for (unsigned b = a + 1; b < 8; ++b)
        if ((mask >> a & 1) && (mask >> b & 1) && oracle::agree_at_least(configs[a], configs[b], 2)) uf.unite(a, b);
    std::set<std::size_t> roots;
    for (unsigned a = 0; a < 8; ++a)
      if (mask >> a & 1) roots.insert(uf.find(a));
    return roots.size();
  };
  std::size_t brute = 0;
  for (unsigned mask = 0; mask < 256; ++mask) {
    bool maximal = true;
    for (unsigned v = 0; v < 8 && maximal; ++v)
      if (!(mask >> v & 1) && comps(mask | 1u << v) >= comps(mask)) maximal = false;
    brute += maximal;
  }

  std::ostringstream os;
  os << all.size() << " structures (brute force " << brute << "); empty=" << counts[CubeComplementKind::Empty]
     << " two-pair=" << counts[CubeComplementKind::TwoPairPlane]
     << " parity=" << counts[CubeComplementKind::ParityClass] << " vertex-cut=" << counts[CubeComplementKind::VertexCut]
     << " unclassified=" << counts[CubeComplementKind::Unclassified];
  return {counts[CubeComplementKind::Unclassified] == 0 && all.size() == brute && brute > 0, os.str()};
}

// 2. Four binary inputs, two blocks of two.
Outcome four_input_example() {
  const auto g2 = uniform_graph(2, binary(4));
  const auto g3 = uniform_graph(3, binary(4));
  const auto& sp = g2.space();
  std::vector<std::vector<Vertex>> blocks{{sp.index_of({1, 1, 1, 1}), sp.index_of({2, 2, 1, 1})},
                                          {sp.index_of({1, 2, 2, 2}), sp.index_of({2, 1, 2, 2})}};
  const RobustnessStructure s(blocks);
  const bool is_components = components_of(g2, s.support()) == s;
  const bool maximal = is_components && is_maximal(s, g2);
  bool joined = true, split = true;
  for (const auto& b : s.blocks()) {
    joined = joined && components_of(g2, b).num_blocks() == 1;
    split = split && components_of(g3, b).num_blocks() == b.size();
  }
  std::ostringstream os;
  os << "components=" << is_components << " maximal=" << maximal << " connected-in-G2=" << joined
     << " split-in-G3=" << split;
  return {maximal && joined && split, os.str()};
}

// 3. Explicit Groebner set against Buchberger; both antitone ranges reported.
Outcome explicit_groebner_basis() {
  std::vector<InputGraph> graphs;
  for (std::size_t m = 1; m <= 3; ++m)
    for (auto& g : all_graphs(m)) graphs.push_back(std::move(g));
  for (auto& g : all_graphs(4))
    if (connected(g)) graphs.push_back(std::move(g));

  std::size_t cases = 0, failed = 0, literal_reduced = 0, literal_equal = 0;
  std::string first;
  for (int d0 : {2, 3})
    for (const auto& g : graphs) {
      ++cases;
      const VariableLayout lay(d0, g);
      const auto polys = polynomials_of(groebner_set(g, d0));
      bool ok = buchberger_criterion(polys) && is_reduced(polys);
      for (const auto& p : polys) ok = ok && p.lm().square_free() && bihomogeneous(p, lay.cols());
      const auto reference = sorted(buchberger(edge_polynomials(g, d0)));
      ok = ok && sorted(polys) == reference;
      if (!ok && failed++ == 0) first = std::to_string(g.num_vertices()) + " vertices, d0=" + std::to_string(d0);

      const auto lit = polynomials_of(groebner_set(g, d0, {.range = AntitoneRange::Literal}));
      literal_reduced += is_reduced(lit);
      literal_equal += sorted(lit) == reference;
    }
  std::ostringstream os;
  os << cases << " cases, " << failed << " failed (endpoint-inclusive range)";
  if (failed) os << ", first: " << first;
  os << "; literal range: reduced " << literal_reduced << "/" << cases << ", equals reference " << literal_equal << "/"
     << cases;
  return {failed == 0, os.str()};
}

// 4. Component-count and edge-based maximality on every subset.
Outcome maximality_equivalence() {
  const std::vector<std::vector<int>> shapes{{2}, {3}, {2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 2, 2}};
  std::size_t graphs = 0, subsets = 0, disagreements = 0;
  for (const auto& d : shapes)
    for (int k = 0; k <= static_cast<int>(d.size()); ++k) {
      const auto g = uniform_graph(k, d);
      ++graphs;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.num_vertices()); ++m) {
        const auto s = components_of(g, oracle::mask_vertices(m));
        ++subsets;
        disagreements += is_maximal(s, g) != maximality_by_edges(s, g);
      }
    }
  std::ostringstream os;
  os << graphs << " graphs, " << subsets << " subsets, " << disagreements << " disagreements";
  return {disagreements == 0, os.str()};
}

// 5. Intersection of component ideals on tiny graphs, union membership on larger ones.
Outcome decomposition() {
  std::size_t small = 0, small_ok = 0;
  for (std::size_t m = 1; m <= 3; ++m)
    for (const auto& g : all_graphs(m)) {
      ++small;
      const auto rep = verify_primary_decomposition(g, 2);
      small_ok += rep.intersection_equality.value_or(false) && rep.ok();
    }

  std::vector<std::pair<InputGraph, int>> big;
  for (const auto& d : std::vector<std::vector<int>>{{2, 2}, {2, 3}, {3, 3}, {2, 2, 2}, {2, 2, 3}, {3, 4}, {2, 6}})
    for (int k = 0; k <= static_cast<int>(d.size()); ++k) big.emplace_back(uniform_graph(k, d), 2);
  big.emplace_back(uniform_graph(1, {2, 2, 2}), 3);
  big.emplace_back(uniform_graph(2, {2, 2, 2}), 3);
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 12; ++t) {
    const std::size_t m = 5 + static_cast<std::size_t>(t) % 8;
    std::vector<std::pair<Vertex, Vertex>> es;
    for (Vertex a = 0; a < m; ++a)
      for (Vertex b = a + 1; b < m; ++b)
        if (rng() % 3 == 0) es.push_back({a, b});
    big.emplace_back(make_simple_graph(m, es), 2 + t % 2);
  }
  std::size_t counterexamples = 0, in_variety = 0;
  std::uint64_t seed = 1;
  for (const auto& [g, d0] : big) {
    const auto rep = verify_union_decomposition(g, d0, 500, seed++);
    counterexamples += rep.counterexamples.size();
    in_variety += rep.in_variety;
  }
  std::ostringstream os;
  os << "intersection equality " << small_ok << "/" << small << " graphs; union: " << big.size()
     << " graphs x 500 trials, " << in_variety << " points in V_G, " << counterexamples << " counterexamples";
  return {small_ok == small && counterexamples == 0, os.str()};
}

// 6. Exact round trip through a maximal structure, then single-cell perturbations.
Outcome ci_round_trip() {
  struct Shape {
    int d0;
    std::vector<int> d;
  };
  const std::vector<Shape> shapes{{2, {2, 2}}, {3, {2, 3}}, {2, {3, 3}}, {3, {3, 3}},       {2, {2, 2, 2}},
                                  {3, {2, 2, 2}}, {2, {2, 2, 3}}, {2, {2, 2, 2, 2}}, {3, {2, 2, 2, 2}}};
  std::map<std::pair<std::size_t, int>, std::vector<RobustnessStructure>> cache;
  std::mt19937_64 rng(6);
  std::size_t round_trip_ok = 0, broken = 0, minor_reported = 0;
  std::map<std::string, std::size_t> intact;
  for (int t = 0; t < 100; ++t) {
    const std::size_t si = rng() % shapes.size();
    const auto& sh = shapes[si];
    const StateSpace sp(sh.d0, sh.d);
    const int k = static_cast<int>(rng() % sh.d.size());  // k < n so at least one CI statement is imposed
    const auto spec = make_uniform_spec(k, sp);
    const auto g = build_graph(spec, sp);
    auto& structures = cache[{si, k}];
    if (structures.empty()) structures = enumerate_maximal_structures(g);
    const auto& s = structures[rng() % structures.size()];

    const auto params = sample_params(s, sh.d0, rng);
    const auto dist = build_from_structure(s, params, sp);
    const bool ok = is_robust(dist, spec).robust && classify_structure(dist, g) == s && membership_in_pb(dist, s, g);
    round_trip_ok += ok;

    const int x0 = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(sh.d0));
    const Vertex x = static_cast<Vertex>(rng() % sp.num_configs());
    JointDistribution bumped = dist;
    Rational delta(1, 2 + static_cast<long>(rng() % 5));
    delta.canonicalize();
    bumped.at(x0, x) += delta;
    bumped.scale(1 / bumped.total());
    const auto rep = is_robust(bumped, spec);
    if (!rep.robust) {
      ++broken;
      minor_reported += rep.witness.has_value() && rep.witness->lhs != rep.witness->rhs;
    } else {
      const auto b = s.block_of(x);
      ++intact[!b ? "outside support" : s.blocks()[*b].size() == 1 ? "singleton block" : "larger block"];
    }
  }
  std::ostringstream os;
  os << "round trip " << round_trip_ok << "/100; perturbation broke robustness in " << broken
     << "/100 with a minor reported in " << minor_reported;
  if (!intact.empty()) {
    os << "; still robust:";
    for (const auto& [why, c] : intact) os << " " << c << " in " << why;
  }
  return {round_trip_ok == 100 && broken >= 95 && minor_reported == broken, os.str()};
}

std::vector<int> random_shape(std::mt19937_64& rng, int max_n) {
  const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_n));
  std::vector<int> d(static_cast<std::size_t>(n));
  for (auto& di : d) di = 2 + static_cast<int>(rng() % 2);
  return d;
}

// 7. Moebius round trip and the potential criterion against direct kernel comparison.
Outcome gibbs_round_trip() {
  std::mt19937_64 rng(7);
  double worst = 0;
  std::size_t pairs = 0, disagreements = 0, robust_pairs = 0;
  for (int t = 0; t < 200; ++t) {
    const auto d = random_shape(rng, 4);
    const int d0 = 2 + static_cast<int>(rng() % 2);
    // half the families are built robust so both answers get exercised
    const auto m = t % 2 ? oracle::random_modalities(d0, d, rng)
                         : oracle::rk_robust_modalities(d0, d, static_cast<int>(rng() % (d.size() + 1)), rng);
    const auto pots = moebius_potentials(m);
    worst = std::max(worst, sup_distance(gibbs_modalities(pots), m));
    for (const auto& x : m.configurations())
      for (Mask s = 0; s <= m.all(); ++s) {
        ++pairs;
        const bool direct = check_robust_at(m, x, s, 1e-9);
        robust_pairs += direct;
        disagreements += direct != potential_robustness_criterion(pots, x, s, 1e-9);
      }
  }
  std::ostringstream os;
  os << "200 families, round-trip sup error " << worst << "; " << pairs << " (x,S) pairs (" << robust_pairs
     << " robust), " << disagreements << " disagreements";
  return {worst <= 1e-9 && disagreements == 0, os.str()};
}

// 8. Coefficient identities and reconstruction of the potentials at robust points.
Outcome k_interaction() {
  bool alpha_ok = true;
  for (int k = 0; k <= 12; ++k) {
    Rational expect(-k, k + 1);
    expect.canonicalize();
    alpha_ok = alpha_ok && alpha_coefficient(k, k, k) == 1 && alpha_coefficient(k + 1, k, k) == expect;
  }
  std::mt19937_64 rng(8);
  double worst = 0;
  std::size_t families = 0;
  bool robust_everywhere = true;
  for (int t = 0; t < 60; ++t) {
    const auto d = random_shape(rng, 4);
    const int d0 = 2 + static_cast<int>(rng() % 2);
    for (int k = 0; k <= static_cast<int>(d.size()); ++k) {
      ++families;
      const auto m = oracle::rk_robust_modalities(d0, d, k, rng);
      const auto dec = k_interaction_decompose(m, k);
      const auto p = moebius_potentials(m);
      for (const auto& x : m.configurations()) {
        robust_everywhere = robust_everywhere && is_rk_robust_at(m, x, k);
        for (Mask a = 0; a <= m.all(); ++a) {
          const auto r = dec.reconstruct(a, x);
          for (int x0 = 1; x0 <= d0; ++x0)
            worst = std::max(worst, std::abs(r[static_cast<std::size_t>(x0 - 1)] - p.at(a, p.row_of(a, x), x0)));
        }
      }
    }
  }
  std::ostringstream os;
  os << "alpha identities " << (alpha_ok ? "exact" : "WRONG") << " for k=0..12; " << families
     << " robust families, reconstruction error " << worst;
  return {alpha_ok && robust_everywhere && worst <= 1e-8, os.str()};
}

// 9. Image bound, product form for one-robustness, binary connectivity.
Outcome structure_bounds() {
  std::size_t bound_checked = 0, bound_violations = 0;
  for (const auto& d : std::vector<std::vector<int>>{{2, 2}, {2, 3}, {3, 3}, {2, 2, 2}, {2, 2, 3}, {2, 2, 2, 2}})
    for (int k = 0; k <= static_cast<int>(d.size()); ++k) {
      StateSpace sp(2, d);
      const auto spec = make_uniform_spec(k, sp);
      const auto bound = image_bound(spec, sp);
      for (const auto& s : enumerate_maximal_structures(build_graph(spec, sp))) {
        ++bound_checked;
        bound_violations += s.num_blocks() > bound;
      }
    }

  std::ostringstream os;
  os << "image bound: " << bound_checked << " structures, " << bound_violations << " violations; product form:";
  std::size_t lines_violations = 0;
  for (const auto& d : std::vector<std::vector<int>>{{2, 2}, {2, 3}, {2, 2, 2}}) {
    const auto g = uniform_graph(1, d);
    std::size_t lines_bad = 0, cover_bad = 0;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << g.num_vertices()); ++m) {
      const auto s = components_of(g, oracle::mask_vertices(m));
      const bool maximal = is_maximal(s, g);
      lines_bad += maximal != check_product_form(s, g.space(), ProductFormRule::Lines);
      cover_bad += maximal != check_product_form(s, g.space(), ProductFormRule::CoordinateCover);
    }
    lines_violations += lines_bad;
    os << " d=(";
    for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
    os << ") lines " << lines_bad << " / cover " << cover_bad << " mismatches;";
  }

  std::size_t conn_checked = 0, conn_violations = 0, conn_degenerate = 0;
  std::string conn_first;
  for (int n = 1; n <= 5; ++n)
    for (int k = 0; 2 * k <= n; ++k) {
      const auto g = uniform_graph(k, binary(n));
      const auto structures =
          enumerate_maximal_structures(g, {.cap_vertices = 64, .strategy = EnumerationStrategy::Pruned});
      for (int s = 0; s <= n - 2 * k; ++s) {
        const auto gs = uniform_graph(s, binary(n));
        for (const auto& st : structures)
          for (const auto& b : st.blocks()) {
            ++conn_checked;
            if (components_of(gs, b).num_blocks() == 1) continue;
            conn_degenerate += k == 0 && s == n;
            if (conn_violations++ == 0)
              conn_first = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " s=" + std::to_string(s);
          }
      }
    }
  os << " connectivity: " << conn_checked << " block checks, " << conn_violations << " violations";
  if (conn_violations)
    os << " (first " << conn_first << "; " << conn_degenerate << " of them at k=0, s=n where G_s has no edges)";
  return {bound_violations == 0 && lines_violations == 0 && conn_violations == 0, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double limit_seconds;  // 0: no limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, 5, cube_taxonomy},        {2, 1, four_input_example}, {3, 600, explicit_groebner_basis},
      {4, 0, maximality_equivalence}, {5, 300, decomposition},  {6, 0, ci_round_trip},
      {7, 0, gibbs_round_trip},     {8, 0, k_interaction},      {9, 0, structure_bounds},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit";
    }
    failures += !o.pass;
    std::printf("%s criterion %d: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
