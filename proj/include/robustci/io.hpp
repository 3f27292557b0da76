#pragma once

// JSON file formats: models, distributions, structures, graphs, modalities,
// and the report documents written by the command-line tool.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "robustci/ci.hpp"
#include "robustci/decomp.hpp"
#include "robustci/error.hpp"
#include "robustci/gibbs.hpp"
#include "robustci/graph.hpp"
#include "robustci/ideal.hpp"
#include "robustci/model.hpp"

namespace robustci::io {

using nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses JSON and reports syntax errors by line and column.
inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw input_error(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

inline json load_json(const std::string& path) { return parse_json(read_file(path), path); }

// Writes through a temporary file in the same directory and renames it, so a
// failed run never leaves a partial file. An empty path or "-" means stdout.
inline void write_atomic(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    std::fflush(stdout);
    return;
  }
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot write '" + path + "'");
    out << content;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw input_error("write to '" + path + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw input_error("cannot move output into place at '" + path + "': " + ec.message());
  }
}

namespace detail {
[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  throw input_error("field '" + field + "': " + what);
}

inline const json& member(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) field_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) field_error(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

inline long long as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) field_error(field, "expected an integer");
  return v.get<long long>();
}

inline std::vector<int> as_int_list(const json& v, const std::string& field) {
  if (!v.is_array()) field_error(field, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(static_cast<int>(as_int(v[i], field + "[" + std::to_string(i) + "]")));
  return out;
}

inline std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) field_error(field, "expected a string");
  return v.get<std::string>();
}

template <class F>
auto guarded(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const input_error& e) {
    field_error(field, e.what());
  }
}
}  // namespace detail

struct Model {
  StateSpace space;
  RobustnessSpec spec;
  std::optional<int> uniform_k;
};

inline Model parse_model(const json& j) {
  using namespace detail;
  const int d0 = static_cast<int>(as_int(member(j, "d0", ""), "d0"));
  const auto d = as_int_list(member(j, "d", ""), "d");
  StateSpace space = guarded("d", [&] { return StateSpace(d0, d); });
  const json& s = member(j, "spec", "");
  if (!s.is_object()) field_error("spec", "expected an object");
  if (s.contains("uniform_k") && s.contains("pairs")) field_error("spec", "give either uniform_k or pairs, not both");
  if (s.contains("uniform_k")) {
    const int k = static_cast<int>(as_int(s["uniform_k"], "spec.uniform_k"));
    auto spec = guarded("spec.uniform_k", [&] { return make_uniform_spec(k, space); });
    return {space, spec, k};
  }
  const json& pairs = member(s, "pairs", "spec");
  if (!pairs.is_array()) field_error("spec.pairs", "expected an array");
  std::vector<SpecPair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string where = "spec.pairs[" + std::to_string(i) + "]";
    SpecPair p{as_int_list(member(pairs[i], "R", where), where + ".R"),
               as_int_list(member(pairs[i], "y", where), where + ".y")};
    if (!space.is_partial_config(p.R, p.y)) field_error(where, "(R, y) is not a partial configuration of the space");
    out.push_back(std::move(p));
  }
  return {space, RobustnessSpec::from_pairs(std::move(out), space), std::nullopt};
}

inline json config_json(const Config& x) { return json(x); }

inline json spec_pair_json(const SpecPair& p) { return {{"R", p.R}, {"y", p.y}}; }

inline json model_json(const StateSpace& space, const RobustnessSpec& spec, std::optional<int> uniform_k) {
  json j{{"d0", space.output_size()}, {"d", space.input_sizes()}};
  if (uniform_k) {
    j["spec"] = {{"uniform_k", *uniform_k}};
  } else {
    json pairs = json::array();
    for (const auto& p : spec.pairs()) pairs.push_back(spec_pair_json(p));
    j["spec"] = {{"pairs", pairs}};
  }
  return j;
}

inline JointDistribution parse_distribution(const json& j, const StateSpace& space) {
  using namespace detail;
  const json& entries = member(j, "entries", "");
  if (!entries.is_array()) field_error("entries", "expected an array");
  JointDistribution dist(space);
  std::vector<std::uint8_t> seen(space.num_configs() * static_cast<std::size_t>(space.output_size()), 0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "entries[" + std::to_string(i) + "]";
    const int x0 = static_cast<int>(as_int(member(entries[i], "x0", where), where + ".x0"));
    const Config x = as_int_list(member(entries[i], "x", where), where + ".x");
    if (x0 < 1 || x0 > space.output_size()) field_error(where + ".x0", "out-of-range index");
    if (!space.contains(x)) field_error(where + ".x", "out-of-range index " + format_config(x));
    const Rational p = guarded(where + ".p", [&] { return parse_rational(as_string(member(entries[i], "p", where), where + ".p")); });
    const Vertex v = space.index_of(x);
    auto& flag = seen[v * static_cast<std::size_t>(space.output_size()) + static_cast<std::size_t>(x0 - 1)];
    if (flag) field_error(where, "duplicate entry");
    flag = 1;
    dist.at(x0, v) = p;
  }
  return dist;
}

inline json distribution_json(const JointDistribution& dist) {
  json entries = json::array();
  const auto& sp = dist.space();
  for (Vertex v = 0; v < sp.num_configs(); ++v)
    for (int x0 = 1; x0 <= sp.output_size(); ++x0)
      entries.push_back({{"x0", x0}, {"x", sp.config(v)}, {"p", to_string(dist.at(x0, v))}});
  return {{"entries", entries}};
}

inline json structure_json(const RobustnessStructure& s, const StateSpace& space) {
  json blocks = json::array();
  for (const auto& b : s.blocks()) {
    json blk = json::array();
    for (Vertex v : b) blk.push_back(space.config(v));
    blocks.push_back(blk);
  }
  return {{"blocks", blocks}};
}

inline RobustnessStructure parse_structure(const json& j, const StateSpace& space) {
  using namespace detail;
  const json& blocks = member(j, "blocks", "");
  if (!blocks.is_array()) field_error("blocks", "expected an array");
  std::vector<std::vector<Vertex>> out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!blocks[b].is_array()) field_error("blocks[" + std::to_string(b) + "]", "expected an array");
    std::vector<Vertex> blk;
    for (std::size_t t = 0; t < blocks[b].size(); ++t) {
      const std::string where = "blocks[" + std::to_string(b) + "][" + std::to_string(t) + "]";
      const Config x = as_int_list(blocks[b][t], where);
      if (!space.contains(x)) field_error(where, "configuration outside the state space");
      blk.push_back(space.index_of(x));
    }
    out.push_back(std::move(blk));
  }
  return guarded("blocks", [&] { return RobustnessStructure(std::move(out)); });
}

inline json graph_json(const InputGraph& g) {
  const auto& sp = g.space();
  json vertices = json::array(), edges = json::array();
  for (Vertex v = 0; v < sp.num_configs(); ++v) vertices.push_back(sp.config(v));
  for (const auto& e : g.edges()) {
    json je{{"u", sp.config(e.u)}, {"v", sp.config(e.v)}};
    je["witness"] = e.witness ? spec_pair_json(*e.witness) : json(nullptr);
    edges.push_back(je);
  }
  return {{"d", sp.input_sizes()}, {"vertices", vertices}, {"edges", edges}};
}

// Either the exported form {"d": [...], "edges": [{"u": cfg, "v": cfg}, ...]}
// or an abstract graph {"num_vertices": m, "edges": [[a, b], ...]} with 1-based labels.
inline InputGraph parse_graph(const json& j) {
  using namespace detail;
  if (!j.is_object()) field_error("", "expected an object");
  const json& edges = member(j, "edges", "");
  if (!edges.is_array()) field_error("edges", "expected an array");
  if (j.contains("num_vertices")) {
    const long long m = as_int(j["num_vertices"], "num_vertices");
    if (m < 1 || m > 4096) field_error("num_vertices", "must lie in 1..4096");
    std::vector<std::pair<Vertex, Vertex>> es;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string where = "edges[" + std::to_string(i) + "]";
      const auto ab = as_int_list(edges[i], where);
      if (ab.size() != 2 || ab[0] < 1 || ab[1] < 1 || ab[0] > m || ab[1] > m)
        field_error(where, "expected two vertex labels in 1..num_vertices");
      es.push_back({static_cast<Vertex>(ab[0] - 1), static_cast<Vertex>(ab[1] - 1)});
    }
    return guarded("edges", [&] { return make_simple_graph(static_cast<std::size_t>(m), es); });
  }
  const auto d = as_int_list(member(j, "d", ""), "d");
  StateSpace space = guarded("d", [&] { return StateSpace(2, d); });
  std::vector<Edge> es;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const Config u = as_int_list(member(edges[i], "u", where), where + ".u");
    const Config v = as_int_list(member(edges[i], "v", where), where + ".v");
    if (!space.contains(u)) field_error(where + ".u", "configuration outside the state space");
    if (!space.contains(v)) field_error(where + ".v", "configuration outside the state space");
    es.push_back({space.index_of(u), space.index_of(v), std::nullopt});
  }
  return guarded("edges", [&] { return InputGraph(space, std::move(es)); });
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string list_key(const std::vector<int>& v) { return json(v).dump(); }

inline json modalities_json(const FunctionalModalities& m) {
  json kernels = json::object();
  for (Mask a = 0; a <= m.all(); ++a) {
    json rows = json::object();
    for (std::size_t r = 0; r < m.num_rows(a); ++r) {
      json probs = json::array();
      for (int x0 = 1; x0 <= m.output_size(); ++x0) probs.push_back(format_double(m.at(a, r, x0)));
      rows[list_key(m.partial_config(a, r))] = probs;
    }
    kernels[list_key(subset_of(a))] = rows;
  }
  return {{"n", m.num_inputs()}, {"d0", m.output_size()}, {"d", m.input_sizes()}, {"kernels", kernels}};
}

inline FunctionalModalities parse_modalities(const json& j) {
  using namespace detail;
  const long long n = as_int(member(j, "n", ""), "n");
  const int d0 = static_cast<int>(as_int(member(j, "d0", ""), "d0"));
  const auto d = as_int_list(member(j, "d", ""), "d");
  if (n != static_cast<long long>(d.size())) field_error("n", "does not match the length of d");
  FunctionalModalities m = guarded("d", [&] { return FunctionalModalities(d0, d); });
  const json& kernels = member(j, "kernels", "");
  if (!kernels.is_object()) field_error("kernels", "expected an object");
  for (Mask a = 0; a <= m.all(); ++a) {
    const std::string key = list_key(subset_of(a));
    const std::string where = "kernels." + key;
    if (!kernels.contains(key)) field_error(where, "missing kernel");
    const json& rows = kernels[key];
    if (!rows.is_object()) field_error(where, "expected an object");
    for (std::size_t r = 0; r < m.num_rows(a); ++r) {
      const std::string rk = list_key(m.partial_config(a, r));
      if (!rows.contains(rk)) field_error(where + "." + rk, "missing row");
      const json& probs = rows[rk];
      if (!probs.is_array() || probs.size() != static_cast<std::size_t>(d0))
        field_error(where + "." + rk, "expected d0 probabilities");
      for (int x0 = 1; x0 <= d0; ++x0) {
        const json& p = probs[static_cast<std::size_t>(x0 - 1)];
        double v;
        if (p.is_string()) {
          const std::string s = p.get<std::string>();
          char* end = nullptr;
          v = std::strtod(s.c_str(), &end);
          if (s.empty() || *end != '\0') field_error(where + "." + rk, "malformed probability '" + s + "'");
        } else if (p.is_number()) {
          v = p.get<double>();
        } else {
          field_error(where + "." + rk, "expected decimal strings");
        }
        if (!std::isfinite(v) || v < 0) field_error(where + "." + rk, "probabilities must be finite and nonnegative");
        m.at(a, r, x0) = v;
      }
    }
  }
  if (!m.rows_normalized()) field_error("kernels", "every kernel row must sum to 1 within 1e-12");
  return m;
}

inline json minor_json(const Minor& m, const StateSpace& space) {
  return {{"x0", m.x0}, {"x0p", m.x0p}, {"x", space.config(m.x)}, {"xp", space.config(m.xp)},
          {"lhs", to_string(m.lhs)}, {"rhs", to_string(m.rhs)}};
}

inline json check_report_json(const RobustnessReport& rep, const RobustnessStructure& s, const StateSpace& space) {
  json j{{"robust", rep.robust}, {"structure", structure_json(s, space)["blocks"]}};
  if (rep.failing_statement) {
    json f = spec_pair_json(*rep.failing_statement);
    f["witness_minor"] = rep.witness ? minor_json(*rep.witness, space) : json(nullptr);
    j["failing_statement"] = f;
  } else {
    j["failing_statement"] = nullptr;
  }
  return j;
}

inline json polynomial_json(const Polynomial& p, const VariableLayout& lay) {
  json terms = json::array();
  for (const auto& t : p.terms()) {
    json exps = json::object();
    for (const auto& [v, e] : t.m.factors()) exps[lay.name(v)] = e;
    terms.push_back({{"coefficient", to_string(t.c)}, {"exponents", exps}});
  }
  return {{"text", format_polynomial(p, lay.namer())}, {"terms", terms}};
}

inline json groebner_element_json(const GroebnerElement& e, const VariableLayout& lay) {
  json path = json::array();
  for (Vertex v : e.path) path.push_back(lay.space().config(v));
  json j = polynomial_json(e.polynomial, lay);
  j["path"] = path;
  j["kappa"] = e.kappa;
  return j;
}

inline json vertex_set_json(const std::vector<Vertex>& y, const StateSpace& space) {
  json a = json::array();
  for (Vertex v : y) a.push_back(space.config(v));
  return a;
}

inline json primary_report_json(const PrimaryReport& rep, const UnionReport* uni, const StateSpace& space) {
  json adm = json::array();
  for (const auto& y : rep.admissible) adm.push_back(vertex_set_json(y, space));
  json legs{{"non_containment", rep.non_containment}, {"membership", rep.membership}};
  legs["intersection_equality"] = rep.intersection_equality ? json(*rep.intersection_equality) : json("skipped");
  json ce = rep.counterexamples;
  json j{{"admissible_Y", adm}, {"legs", legs}};
  if (uni) {
    j["union"] = {{"trials", uni->trials}, {"points_in_variety", uni->in_variety}};
    for (const auto& c : uni->counterexamples) ce.push_back(c);
  }
  j["counterexamples"] = ce;
  return j;
}

}  // namespace robustci::io
