// robustci: command-line front end.
//
// Exit codes: 0 ok, 1 distribution not robust, 2 parse or input error,
// 3 size cap exceeded, 4 verification failure.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robustci/io.hpp"
#include "robustci/parallel.hpp"

using namespace robustci;
using io::json;

namespace {

enum Exit { kOk = 0, kNotRobust = 1, kInputError = 2, kCapExceeded = 3, kVerifyFailed = 4 };

struct Common {
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app->add_option("--out", c.out, "Output file (default stdout)");
  app->add_option("--seed", c.seed, "Random seed");
}

void emit(const Common& c, const json& j, const std::string& text) {
  io::write_atomic(c.out, c.format == "json" ? j.dump(2) + "\n" : text);
}

template <class F>
auto detail_guard(const std::string& origin, F&& f) {
  try {
    return f();
  } catch (const input_error& e) {
    throw input_error(origin + ": " + e.what());
  }
}

// Either a model (graph built from its spec) or an explicit graph file.
struct GraphInput {
  std::optional<io::Model> model;
  std::optional<InputGraph> graph;
};

GraphInput load_graph_input(const std::string& model_path, const std::string& graph_path) {
  if (model_path.empty() == graph_path.empty()) throw input_error("give exactly one of --model and --graph");
  GraphInput in;
  if (!model_path.empty()) {
    in.model = io::parse_model(io::load_json(model_path));
    in.graph = build_graph(in.model->spec, in.model->space);
  } else {
    const json j = io::load_json(graph_path);
    in.graph = detail_guard(graph_path, [&] { return io::parse_graph(j); });
  }
  return in;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

std::string set_text(const std::vector<Vertex>& y, const StateSpace& sp) {
  std::vector<std::string> parts;
  for (Vertex v : y) parts.push_back(format_config(sp.config(v)));
  return "{" + join(parts, ",") + "}";
}

std::string structure_text(const RobustnessStructure& s, const StateSpace& sp) {
  std::vector<std::string> parts;
  for (const auto& b : s.blocks()) parts.push_back(set_text(b, sp));
  return "[" + join(parts, " ") + "]";
}

std::vector<double> parse_doubles(const std::string& csv, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || !std::isfinite(v)) throw input_error(flag + ": malformed number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw input_error(flag + ": expected a comma-separated list");
  return out;
}

std::vector<int> parse_ints(const std::string& csv, const std::string& flag) {
  std::vector<int> out;
  for (double v : parse_doubles(csv, flag)) {
    if (v != static_cast<int>(v)) throw input_error(flag + ": expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// graph ----------------------------------------------------------------------

int cmd_graph(const Common& c, const std::string& model_path) {
  const auto m = io::parse_model(io::load_json(model_path));
  const auto g = build_graph(m.spec, m.space);
  json j = io::graph_json(g);
  j["num_vertices"] = g.num_vertices();
  j["num_edges"] = g.num_edges();
  std::ostringstream t;
  t << g.num_vertices() << " vertices, " << g.num_edges() << " edges\n";
  for (const auto& e : g.edges()) {
    t << format_config(m.space.config(e.u)) << " -- " << format_config(m.space.config(e.v));
    if (e.witness) t << "  via R=" << format_config(e.witness->R) << " y=" << format_config(e.witness->y);
    t << "\n";
  }
  emit(c, j, t.str());
  return kOk;
}

// structures -----------------------------------------------------------------

struct StructuresArgs {
  std::string model;
  bool maximal_only = false;
  bool classify = false;
  std::size_t cap_vertices = 20;
  std::string strategy = "exhaustive";
};

int cmd_structures(const Common& c, const StructuresArgs& a) {
  const auto m = io::parse_model(io::load_json(a.model));
  const auto g = build_graph(m.spec, m.space);
  EnumerationOptions opts;
  opts.cap_vertices = a.cap_vertices;
  opts.threads = thread_count_from_env();
  opts.strategy = a.strategy == "pruned" ? EnumerationStrategy::Pruned : EnumerationStrategy::Exhaustive;
  const auto all = enumerate_maximal_structures(g, opts);

  std::optional<std::size_t> bound;
  try {
    bound = image_bound(m.spec, m.space);
  } catch (const input_error&) {
  }
  const bool cube = is_binary_cube_graph(g);
  std::map<std::string, std::size_t> kinds;
  if (a.classify && cube)
    for (auto k : {CubeComplementKind::Empty, CubeComplementKind::TwoPairPlane, CubeComplementKind::ParityClass,
                   CubeComplementKind::VertexCut, CubeComplementKind::Unclassified})
      kinds[to_string(k)] = 0;

  json list = json::array();
  std::ostringstream t;
  t << all.size() << " maximal structures\n";
  for (const auto& s : all) {
    json e = io::structure_json(s, m.space);
    t << structure_text(s, m.space);
    if (!a.maximal_only) {
      e["maximal_by_edges"] = maximality_by_edges(s, g);
      e["within_image_bound"] = bound ? json(s.num_blocks() <= *bound) : json(nullptr);
    }
    if (a.classify && cube) {
      const auto kind = to_string(classify_cube_complement(g, complement_of(s.support(), g.num_vertices())));
      ++kinds[kind];
      e["complement_kind"] = kind;
      t << "  complement: " << kind;
    }
    t << "\n";
    list.push_back(e);
  }
  json j{{"count", all.size()}, {"structures", list}, {"num_vertices", g.num_vertices()}};
  j["image_bound"] = bound ? json(*bound) : json(nullptr);
  if (a.classify) {
    if (cube) {
      j["classification"] = kinds;
      t << "classification:";
      for (const auto& [k, n] : kinds) t << " " << k << "=" << n;
      t << "\n";
    } else {
      j["classification"] = nullptr;
      t << "classification: not a binary 3-cube graph\n";
    }
  }
  emit(c, j, t.str());
  return kOk;
}

// check ----------------------------------------------------------------------

int cmd_check(const Common& c, const std::string& model_path, const std::string& dist_path) {
  const auto m = io::parse_model(io::load_json(model_path));
  const json dj = io::load_json(dist_path);
  const auto dist = detail_guard(dist_path, [&] { return io::parse_distribution(dj, m.space); });
  if (auto v = validate_distribution(dist, m.space)) {
    json err{{"error", "invalid distribution"}, {"violation", to_string(v->kind)}, {"detail", v->message}};
    std::cerr << err.dump(2) << "\n";
    return kInputError;
  }
  const auto g = build_graph(m.spec, m.space);
  const auto rep = is_robust(dist, m.spec);
  const auto s = classify_structure(dist, g);
  const json j = io::check_report_json(rep, s, m.space);
  std::ostringstream t;
  t << (rep.robust ? "robust" : "not robust") << "\nstructure: " << structure_text(s, m.space) << "\n";
  if (rep.failing_statement) {
    t << "failing statement: R=" << format_config(rep.failing_statement->R)
      << " y=" << format_config(rep.failing_statement->y) << "\n";
    if (rep.witness)
      t << "minor: x=" << format_config(m.space.config(rep.witness->x))
        << " x'=" << format_config(m.space.config(rep.witness->xp)) << " rows " << rep.witness->x0 << ","
        << rep.witness->x0p << ": " << to_string(rep.witness->lhs) << " != " << to_string(rep.witness->rhs) << "\n";
  }
  emit(c, j, t.str());
  return rep.robust ? kOk : kNotRobust;
}

// groebner -------------------------------------------------------------------

struct GroebnerArgs {
  std::string model, graph;
  int d0 = 0;
  bool verify = false;
  bool literal = false;
  std::size_t cap_spairs = 50000;
  std::size_t cap_terms = 10000;
};

int resolve_d0(int flag, const GraphInput& in) {
  if (flag) return flag;
  if (in.model) return in.model->space.output_size();
  throw input_error("--d0 is required with --graph");
}

int cmd_groebner(const Common& c, const GroebnerArgs& a) {
  const auto in = load_graph_input(a.model, a.graph);
  const auto& g = *in.graph;
  const int d0 = resolve_d0(a.d0, in);
  GroebnerSetOptions opts;
  opts.range = a.literal ? AntitoneRange::Literal : AntitoneRange::EndpointInclusive;
  const auto basis = groebner_set(g, d0, opts);
  const VariableLayout lay(d0, g);
  const auto polys = polynomials_of(basis);

  json elems = json::array();
  for (const auto& e : basis) elems.push_back(io::groebner_element_json(e, lay));
  json j{{"d0", d0}, {"size", basis.size()}, {"elements", elems}, {"num_edge_generators", edge_generators(g, d0).size()}};
  j["antitone_range"] = a.literal ? "literal" : "endpoint-inclusive";
  std::string text = format_basis_text(polys, lay);

  bool ok = true;
  if (a.verify) {
    GroebnerCaps caps{a.cap_spairs, a.cap_terms};
    bool square_free = true, homogeneous = true;
    for (const auto& p : polys) {
      square_free = square_free && p.lm().square_free();
      homogeneous = homogeneous && bihomogeneous(p, lay.cols());
    }
    const auto oracle = buchberger(edge_polynomials(g, d0), caps);
    auto sorted = polys;
    std::sort(sorted.begin(), sorted.end());
    auto expected = oracle;
    std::sort(expected.begin(), expected.end());
    json v{{"buchberger_criterion", buchberger_criterion(polys, caps)},
           {"reduced", is_reduced(polys)},
           {"square_free_initial_terms", square_free},
           {"bihomogeneous", homogeneous},
           {"equals_buchberger", sorted == expected}};
    for (const auto& [_, val] : v.items()) ok = ok && val.get<bool>();
    v["all_passed"] = ok;
    j["verification"] = v;
    text += "verification:";
    for (const auto& [k, val] : v.items()) text += " " + k + "=" + (val.get<bool>() ? "pass" : "FAIL");
    text += "\n";
  }
  emit(c, j, text);
  return ok ? kOk : kVerifyFailed;
}

// decompose ------------------------------------------------------------------

struct DecomposeArgs {
  std::string model, graph;
  int d0 = 0;
  std::size_t trials = 100;
  std::size_t cap_vertices = 20;
  std::size_t cap_spairs = 50000;
};

int cmd_decompose(const Common& c, const DecomposeArgs& a) {
  const auto in = load_graph_input(a.model, a.graph);
  const auto& g = *in.graph;
  const int d0 = resolve_d0(a.d0, in);
  EnumerationOptions opts;
  opts.cap_vertices = a.cap_vertices;
  opts.threads = thread_count_from_env();
  GroebnerCaps caps;
  caps.max_spairs = a.cap_spairs;
  const auto prim = verify_primary_decomposition(g, d0, caps, opts);
  const auto uni = verify_union_decomposition(g, d0, a.trials, c.seed);
  json j = io::primary_report_json(prim, &uni, g.space());
  j["d0"] = d0;
  const bool ok = prim.ok() && uni.ok();
  j["passed"] = ok;
  std::ostringstream t;
  t << prim.admissible.size() << " admissible index sets\n";
  for (const auto& y : prim.admissible) t << "  " << set_text(y, g.space()) << "\n";
  t << "non-containment: " << (prim.non_containment ? "pass" : "FAIL") << "\n"
    << "membership: " << (prim.membership ? "pass" : "FAIL") << "\n"
    << "intersection equality: "
    << (prim.intersection_equality ? (*prim.intersection_equality ? "pass" : "FAIL") : "skipped") << "\n"
    << "union check: " << uni.trials << " trials, " << uni.in_variety << " points in the variety, "
    << uni.counterexamples.size() << " counterexamples\n";
  emit(c, j, t.str());
  return ok ? kOk : kVerifyFailed;
}

// gibbs ----------------------------------------------------------------------

struct GibbsArgs {
  std::string modalities;
  std::string neuron;
  std::string example;
  int d0 = 2;
  std::optional<int> k;
  std::vector<std::string> alpha;
};

int cmd_gibbs(const Common& c, const GibbsArgs& a) {
  const int sources = !a.modalities.empty() + !a.neuron.empty() + !a.example.empty();
  if (sources != 1) throw input_error("give exactly one of --modalities, --neuron and --example");
  std::optional<FunctionalModalities> loaded;
  if (!a.modalities.empty()) {
    const json j = io::load_json(a.modalities);
    loaded = detail_guard(a.modalities, [&] { return io::parse_modalities(j); });
  } else if (!a.neuron.empty()) {
    loaded = neuron_modalities(parse_doubles(a.neuron, "--neuron"));
  } else {
    if (a.example != "diagonal") throw input_error("--example: unknown example '" + a.example + "'");
    if (a.d0 < 2) throw input_error("--d0 must be >= 2");
    loaded = diagonal_robust_example(a.d0, c.seed);
  }
  const FunctionalModalities& mods = *loaded;

  const auto pots = moebius_potentials(mods);
  const double err = sup_distance(mods, gibbs_modalities(pots));
  json j{{"n", mods.num_inputs()}, {"d0", mods.output_size()}, {"round_trip_error", err}};
  std::ostringstream t;
  t << "round-trip sup error: " << io::format_double(err) << "\n";

  json table = json::array();
  json robust_set = json::object();
  bool criterion_agrees = true;
  for (Mask s = 1; s <= mods.all(); ++s) {
    json xs = json::array();
    for (const auto& x : mods.configurations()) {
      const bool direct = check_robust_at(mods, x, s);
      const bool crit = potential_robustness_criterion(pots, x, s);
      criterion_agrees = criterion_agrees && direct == crit;
      table.push_back({{"x", x}, {"S", subset_of(s)}, {"robust", direct}, {"potential_criterion", crit}});
      if (direct) xs.push_back(x);
    }
    robust_set[io::list_key(subset_of(s))] = xs;
    t << "robust against knocking out " << format_config(subset_of(s)) << " at " << xs.size() << " of "
      << mods.configurations().size() << " configurations\n";
  }
  j["robustness"] = table;
  j["robust_set"] = robust_set;
  j["criterion_agrees"] = criterion_agrees;

  json alphas = json::array();
  for (const auto& spec : a.alpha) {
    const auto v = parse_ints(spec, "--alpha");
    if (v.size() != 3) throw input_error("--alpha expects a,c,k");
    const Rational q = alpha_coefficient(v[0], v[1], v[2]);
    alphas.push_back({{"a", v[0]}, {"c", v[1]}, {"k", v[2]}, {"value", to_string(q)}});
    t << "alpha(" << v[0] << "," << v[1] << "," << v[2] << ") = " << to_string(q) << "\n";
  }
  j["alpha"] = alphas;

  if (a.k) {
    const int k = *a.k;
    const auto dec = k_interaction_decompose(mods, k);
    double worst = 0;
    json points = json::array();
    for (const auto& x : mods.configurations()) {
      if (!is_rk_robust_at(mods, x, k)) continue;
      points.push_back(x);
      for (Mask am = 0; am <= mods.all(); ++am) {
        const auto r = dec.reconstruct(am, x);
        for (int x0 = 1; x0 <= mods.output_size(); ++x0)
          worst = std::max(worst, std::abs(r[static_cast<std::size_t>(x0 - 1)] - pots.at(am, pots.row_of(am, x), x0)));
      }
    }
    const auto tilde = check_tilde_constraints(dec);
    j["k_interaction"] = {{"k", k},
                          {"robust_points", points},
                          {"reconstruction_error", worst},
                          {"tilde", {{"lower_family", tilde.lower_ok},
                                     {"top_family", tilde.top_ok},
                                     {"first_failure", tilde.first_failure}}}};
    t << "k=" << k << ": " << points.size() << " robust configurations, reconstruction error "
      << io::format_double(worst) << ", constraint families lower=" << (tilde.lower_ok ? "ok" : "violated")
      << " top=" << (tilde.top_ok ? "ok" : "violated") << "\n";
  }
  emit(c, j, t.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knockout-robustness structures and binomial edge ideals"};
  app.require_subcommand(1);
  Common common;

  std::string model_path, dist_path;
  auto* graph_cmd = app.add_subcommand("graph", "Edges of the input graph of a model");
  graph_cmd->add_option("--model", model_path, "Model file")->required();
  add_common(graph_cmd, common);

  StructuresArgs sa;
  auto* st = app.add_subcommand("structures", "Maximal robustness structures");
  st->add_option("--model", sa.model, "Model file")->required();
  st->add_flag("--maximal-only", sa.maximal_only, "Print only the blocks of each structure");
  st->add_flag("--classify-complements", sa.classify, "Tag complements on the binary 3-cube");
  st->add_option("--cap-vertices", sa.cap_vertices, "Refuse graphs with more vertices");
  st->add_option("--strategy", sa.strategy, "Enumeration strategy")->check(CLI::IsMember({"exhaustive", "pruned"}));
  add_common(st, common);

  auto* ck = app.add_subcommand("check", "Robustness of a joint distribution");
  ck->add_option("--model", model_path, "Model file")->required();
  ck->add_option("--dist", dist_path, "Distribution file")->required();
  add_common(ck, common);

  GroebnerArgs ga;
  auto* gb = app.add_subcommand("groebner", "Reduced Groebner basis of the binomial edge ideal");
  gb->add_option("--model", ga.model, "Model file");
  gb->add_option("--graph", ga.graph, "Graph file");
  gb->add_option("--d0", ga.d0, "Number of rows (output letters)");
  gb->add_flag("--verify", ga.verify, "Check the basis against Buchberger's algorithm");
  gb->add_flag("--literal-antitone", ga.literal, "Constrain labels on positions 1..r only");
  gb->add_option("--cap-spairs", ga.cap_spairs, "S-pair cap for verification");
  gb->add_option("--cap-terms", ga.cap_terms, "Polynomial size cap for verification");
  add_common(gb, common);

  DecomposeArgs da;
  auto* dc = app.add_subcommand("decompose", "Check the decomposition of the edge ideal");
  dc->add_option("--model", da.model, "Model file");
  dc->add_option("--graph", da.graph, "Graph file");
  dc->add_option("--d0", da.d0, "Number of rows (output letters)");
  dc->add_option("--trials", da.trials, "Sampled points for the union check");
  dc->add_option("--cap-vertices", da.cap_vertices, "Refuse graphs with more vertices");
  dc->add_option("--cap-spairs", da.cap_spairs, "S-pair cap");
  add_common(dc, common);

  GibbsArgs gi;
  auto* gs = app.add_subcommand("gibbs", "Moebius potentials and pointwise robustness of kernels");
  gs->add_option("--modalities", gi.modalities, "Modalities file");
  gs->add_option("--neuron", gi.neuron, "Neuron weights w1,...,wn");
  gs->add_option("--example", gi.example, "Built-in example (diagonal)");
  gs->add_option("--d0", gi.d0, "Output letters for --example");
  gs->add_option("--k", gi.k, "Order of the k-interaction decomposition");
  gs->add_option("--alpha", gi.alpha, "Coefficient a,c,k (repeatable)");
  add_common(gs, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (graph_cmd->parsed()) return cmd_graph(common, model_path);
    if (st->parsed()) return cmd_structures(common, sa);
    if (ck->parsed()) return cmd_check(common, model_path, dist_path);
    if (gb->parsed()) return cmd_groebner(common, ga);
    if (dc->parsed()) return cmd_decompose(common, da);
    if (gs->parsed()) return cmd_gibbs(common, gi);
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const resource_error& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const contract_error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
