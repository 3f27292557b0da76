#pragma once

// Sparse multivariate polynomials over the rationals under pure lex order
// (a larger variable id is more significant), with division, S-polynomials,
// Buchberger completion to the reduced basis, and ideal intersection by
// elimination.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "robustci/error.hpp"
#include "robustci/rational.hpp"

namespace robustci {

using Var = std::uint32_t;

class Monomial {
 public:
  using Factor = std::pair<Var, std::uint32_t>;  // (variable, positive exponent)

  Monomial() = default;
  explicit Monomial(std::vector<Factor> f) : f_(std::move(f)) {
    std::sort(f_.begin(), f_.end(), [](const Factor& a, const Factor& b) { return a.first > b.first; });
    std::vector<Factor> merged;
    for (const auto& [v, e] : f_) {
      if (e == 0) continue;
      if (!merged.empty() && merged.back().first == v)
        merged.back().second += e;
      else
        merged.push_back({v, e});
    }
    f_ = std::move(merged);
  }
  static Monomial var(Var v, std::uint32_t e = 1) { return Monomial({{v, e}}); }

  const std::vector<Factor>& factors() const { return f_; }
  bool is_one() const { return f_.empty(); }

  std::uint32_t degree() const {
    std::uint32_t d = 0;
    for (const auto& [v, e] : f_) d += e;
    return d;
  }

  std::uint32_t exponent(Var v) const {
    for (const auto& [w, e] : f_)
      if (w == v) return e;
    return 0;
  }

  bool square_free() const {
    return std::all_of(f_.begin(), f_.end(), [](const Factor& x) { return x.second == 1; });
  }

  Var max_var() const { return f_.empty() ? 0 : f_.front().first; }

  bool divides(const Monomial& m) const {
    std::size_t j = 0;
    for (const auto& [v, e] : f_) {
      while (j < m.f_.size() && m.f_[j].first > v) ++j;
      if (j == m.f_.size() || m.f_[j].first != v || m.f_[j].second < e) return false;
    }
    return true;
  }

  bool coprime(const Monomial& m) const {
    std::size_t i = 0, j = 0;
    while (i < f_.size() && j < m.f_.size()) {
      if (f_[i].first == m.f_[j].first) return false;
      if (f_[i].first > m.f_[j].first)
        ++i;
      else
        ++j;
    }
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    return combine(a, b, [](std::uint32_t x, std::uint32_t y) { return x + y; });
  }
  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    return combine(a, b, [](std::uint32_t x, std::uint32_t y) { return std::max(x, y); });
  }
  // a / b; b must divide a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    if (!b.divides(a)) throw contract_error("monomial quotient by a non-divisor");
    Monomial q;
    std::size_t j = 0;
    for (const auto& [v, e] : a.f_) {
      while (j < b.f_.size() && b.f_[j].first > v) ++j;
      const std::uint32_t sub = (j < b.f_.size() && b.f_[j].first == v) ? b.f_[j].second : 0;
      if (e > sub) q.f_.push_back({v, e - sub});
    }
    return q;
  }

  // Lex: compare exponents from the most significant variable down.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    const std::size_t n = std::min(a.f_.size(), b.f_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (a.f_[i].first != b.f_[i].first) return a.f_[i].first <=> b.f_[i].first;
      if (a.f_[i].second != b.f_[i].second) return a.f_[i].second <=> b.f_[i].second;
    }
    return a.f_.size() <=> b.f_.size();
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  template <class Op>
  static Monomial combine(const Monomial& a, const Monomial& b, Op op) {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < a.f_.size() || j < b.f_.size()) {
      if (j == b.f_.size() || (i < a.f_.size() && a.f_[i].first > b.f_[j].first))
        r.f_.push_back({a.f_[i].first, op(a.f_[i].second, 0u)}), ++i;
      else if (i == a.f_.size() || b.f_[j].first > a.f_[i].first)
        r.f_.push_back({b.f_[j].first, op(0u, b.f_[j].second)}), ++j;
      else
        r.f_.push_back({a.f_[i].first, op(a.f_[i].second, b.f_[j].second)}), ++i, ++j;
    }
    return r;
  }

  std::vector<Factor> f_;
};

struct Term {
  Monomial m;
  Rational c;
  bool operator==(const Term&) const = default;
};

// Terms sorted strictly descending, no zero coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::vector<Term> terms) : t_(std::move(terms)) { normalize(); }
  static Polynomial constant(const Rational& c) { return Polynomial({Term{Monomial(), c}}); }
  static Polynomial var(Var v) { return Polynomial({Term{Monomial::var(v), 1}}); }

  const std::vector<Term>& terms() const { return t_; }
  std::size_t size() const { return t_.size(); }
  bool is_zero() const { return t_.empty(); }
  const Term& leading() const {
    if (t_.empty()) throw contract_error("leading term of the zero polynomial");
    return t_.front();
  }
  const Monomial& lm() const { return leading().m; }
  const Rational& lc() const { return leading().c; }

  Polynomial monic() const {
    if (is_zero()) return *this;
    Polynomial p = *this;
    const Rational inv = 1 / lc();
    for (auto& t : p.t_) t.c *= inv;
    return p;
  }

  Polynomial times(const Monomial& m, const Rational& c) const {
    Polynomial p;
    if (c == 0) return p;
    p.t_.reserve(t_.size());
    for (const auto& t : t_) p.t_.push_back({t.m * m, t.c * c});
    return p;
  }

  // this + c * m * g, by merging two sorted term lists.
  Polynomial add_scaled(const Polynomial& g, const Monomial& m, const Rational& c) const {
    Polynomial r;
    r.t_.reserve(t_.size() + g.t_.size());
    std::size_t i = 0, j = 0;
    while (i < t_.size() || j < g.t_.size()) {
      if (j == g.t_.size()) {
        r.t_.push_back(t_[i++]);
        continue;
      }
      Term gt{g.t_[j].m * m, g.t_[j].c * c};
      if (i == t_.size()) {
        r.t_.push_back(std::move(gt));
        ++j;
        continue;
      }
      const auto cmp = t_[i].m <=> gt.m;
      if (cmp > 0) {
        r.t_.push_back(t_[i++]);
      } else if (cmp < 0) {
        r.t_.push_back(std::move(gt));
        ++j;
      } else {
        Rational s = t_[i].c + gt.c;
        if (s != 0) r.t_.push_back({t_[i].m, std::move(s)});
        ++i, ++j;
      }
    }
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return a.add_scaled(b, Monomial(), 1); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a.add_scaled(b, Monomial(), -1); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& t : b.t_) r = r.add_scaled(a, t.m, t.c);
    return r;
  }

  bool operator==(const Polynomial&) const = default;
  friend bool operator<(const Polynomial& a, const Polynomial& b) {
    const std::size_t n = std::min(a.t_.size(), b.t_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (a.t_[i].m != b.t_[i].m) return a.t_[i].m < b.t_[i].m;
      if (a.t_[i].c != b.t_[i].c) return a.t_[i].c < b.t_[i].c;
    }
    return a.t_.size() < b.t_.size();
  }

 private:
  void normalize() {
    std::sort(t_.begin(), t_.end(), [](const Term& a, const Term& b) { return a.m > b.m; });
    std::vector<Term> out;
    for (auto& t : t_) {
      if (!out.empty() && out.back().m == t.m)
        out.back().c += t.c;
      else
        out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return t.c == 0; });
    t_ = std::move(out);
  }

  std::vector<Term> t_;
};

using VarNamer = std::function<std::string(Var)>;

inline std::string default_var_name(Var v) { return "v" + std::to_string(v); }

inline std::string format_monomial(const Monomial& m, const VarNamer& name = default_var_name) {
  if (m.is_one()) return "1";
  std::string s;
  for (const auto& [v, e] : m.factors()) {
    if (!s.empty()) s += "*";
    s += name(v);
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

inline std::string format_polynomial(const Polynomial& p, const VarNamer& name = default_var_name) {
  if (p.is_zero()) return "0";
  std::string s;
  for (const auto& t : p.terms()) {
    const bool neg = t.c < 0;
    const Rational a = neg ? Rational(-t.c) : t.c;
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    if (t.m.is_one()) {
      s += a.get_str();
    } else {
      if (a != 1) s += a.get_str() + "*";
      s += format_monomial(t.m, name);
    }
  }
  return s;
}

struct GroebnerCaps {
  std::size_t max_spairs = 50000;
  std::size_t max_terms = 10000;
};

struct GroebnerStats {
  std::size_t spairs_processed = 0;
  std::size_t coprime_skipped = 0;
  std::size_t zero_remainders = 0;
  std::size_t nonzero_remainders = 0;
  std::size_t non_binomial_remainders = 0;  // remainders with more than two terms
};

namespace detail {
inline void check_term_cap(const Polynomial& p, const GroebnerCaps& caps) {
  if (p.size() > caps.max_terms)
    throw resource_error("polynomial support cap of " + std::to_string(caps.max_terms) + " terms exceeded (" +
                         std::to_string(p.size()) + " terms)");
}

inline const Polynomial* find_divisor(const Monomial& m, const std::vector<Polynomial>& basis) {
  for (const auto& g : basis)
    if (g.lm().divides(m)) return &g;
  return nullptr;
}
}  // namespace detail

// Full multivariate division remainder.
inline Polynomial reduce(Polynomial f, const std::vector<Polynomial>& basis, const GroebnerCaps& caps = {}) {
  for (const auto& g : basis)
    if (g.is_zero()) throw input_error("reduction basis contains the zero polynomial");
  std::vector<Term> rem;
  while (!f.is_zero()) {
    const Term& lt = f.leading();
    if (const Polynomial* g = detail::find_divisor(lt.m, basis)) {
      f = f.add_scaled(*g, lt.m / g->lm(), -lt.c / g->lc());
      detail::check_term_cap(f, caps);
    } else {
      rem.push_back(lt);
      f = Polynomial(std::vector<Term>(f.terms().begin() + 1, f.terms().end()));
    }
  }
  return Polynomial(std::move(rem));
}

inline Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) {
  if (f.is_zero() || g.is_zero()) throw input_error("S-polynomial of the zero polynomial");
  const Monomial l = lcm(f.lm(), g.lm());
  return f.times(l / f.lm(), 1 / f.lc()).add_scaled(g, l / g.lm(), -1 / g.lc());
}

// Minimal, inter-reduced, monic, sorted ascending by leading monomial.
inline std::vector<Polynomial> reduce_basis(std::vector<Polynomial> g, const GroebnerCaps& caps = {}) {
  std::erase_if(g, [](const Polynomial& p) { return p.is_zero(); });
  for (auto& p : g) p = p.monic();
  std::sort(g.begin(), g.end(), [](const Polynomial& a, const Polynomial& b) {
    return a.lm() != b.lm() ? a.lm() < b.lm() : a < b;
  });
  std::vector<Polynomial> minimal;
  for (const auto& p : g)
    if (!detail::find_divisor(p.lm(), minimal)) minimal.push_back(p);
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Polynomial> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    out.push_back(reduce(minimal[i], others, caps).monic());
  }
  std::sort(out.begin(), out.end(), [](const Polynomial& a, const Polynomial& b) { return a.lm() < b.lm(); });
  return out;
}

struct GroebnerResult {
  std::vector<Polynomial> basis;
  GroebnerStats stats;
};

// Normal strategy: the pair with the smallest lcm degree first, ties broken by
// lcm in lex order and then by pair indices.
inline GroebnerResult buchberger_with_stats(const std::vector<Polynomial>& gens, const GroebnerCaps& caps = {}) {
  GroebnerResult res;
  auto& g = res.basis;
  for (const auto& p : gens) {
    if (p.is_zero()) throw input_error("Buchberger input contains the zero polynomial");
    g.push_back(p.monic());
  }
  using Key = std::tuple<std::uint32_t, Monomial, std::size_t, std::size_t>;
  std::set<Key> pairs;
  auto add_pairs = [&](std::size_t j) {
    for (std::size_t i = 0; i < j; ++i) {
      const Monomial l = lcm(g[i].lm(), g[j].lm());
      pairs.insert({l.degree(), l, i, j});
    }
  };
  for (std::size_t j = 0; j < g.size(); ++j) add_pairs(j);
  while (!pairs.empty()) {
    const auto [deg, l, i, j] = *pairs.begin();
    pairs.erase(pairs.begin());
    if (g[i].lm().coprime(g[j].lm())) {
      ++res.stats.coprime_skipped;
      continue;
    }
    if (++res.stats.spairs_processed > caps.max_spairs)
      throw resource_error("S-pair cap of " + std::to_string(caps.max_spairs) + " exceeded with " +
                           std::to_string(g.size()) + " basis elements and " + std::to_string(pairs.size()) +
                           " pairs pending");
    Polynomial r = reduce(s_polynomial(g[i], g[j]), g, caps);
    if (r.is_zero()) {
      ++res.stats.zero_remainders;
      continue;
    }
    ++res.stats.nonzero_remainders;
    if (r.size() > 2) ++res.stats.non_binomial_remainders;
    g.push_back(r.monic());
    add_pairs(g.size() - 1);
  }
  g = reduce_basis(std::move(g), caps);
  return res;
}

inline std::vector<Polynomial> buchberger(const std::vector<Polynomial>& gens, const GroebnerCaps& caps = {}) {
  return buchberger_with_stats(gens, caps).basis;
}

inline bool buchberger_criterion(const std::vector<Polynomial>& basis, const GroebnerCaps& caps = {}) {
  for (const auto& p : basis)
    if (p.is_zero()) return false;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (!reduce(s_polynomial(basis[i], basis[j]), basis, caps).is_zero()) return false;
  return true;
}

inline bool ideal_membership(const Polynomial& f, const std::vector<Polynomial>& gb, const GroebnerCaps& caps = {}) {
  if (!buchberger_criterion(gb, caps)) throw contract_error("ideal membership needs a Groebner basis");
  return reduce(f, gb, caps).is_zero();
}

// Row/column gradings for variables laid out as id = (row-1) * ncols + col.
struct Bidegree {
  std::map<int, std::uint32_t> rows;
  std::map<std::size_t, std::uint32_t> cols;
  bool operator==(const Bidegree&) const = default;
};

inline Bidegree bidegree(const Monomial& m, std::size_t ncols) {
  if (ncols == 0) throw input_error("bidegree needs at least one column");
  Bidegree b;
  for (const auto& [v, e] : m.factors()) {
    b.rows[static_cast<int>(v / ncols) + 1] += e;
    b.cols[v % ncols] += e;
  }
  return b;
}

inline bool bihomogeneous(const Polynomial& p, std::size_t ncols) {
  for (const auto& t : p.terms())
    if (!(bidegree(t.m, ncols) == bidegree(p.lm(), ncols))) return false;
  return true;
}

// Reduced basis of I intersect J through a fresh variable t placed above
// every variable in use, so lex already eliminates t first.
inline std::vector<Polynomial> intersect_ideals(const std::vector<Polynomial>& i_gens,
                                                const std::vector<Polynomial>& j_gens, const GroebnerCaps& caps = {}) {
  Var top = 0;
  for (const auto* side : {&i_gens, &j_gens})
    for (const auto& p : *side)
      for (const auto& t : p.terms()) top = std::max(top, t.m.max_var());
  const Var t = top + 1;
  const Polynomial tp = Polynomial::var(t);
  const Polynomial one_minus_t = Polynomial::constant(1) - tp;
  std::vector<Polynomial> gens;
  for (const auto& p : i_gens)
    if (!p.is_zero()) gens.push_back(tp * p);
  for (const auto& p : j_gens)
    if (!p.is_zero()) gens.push_back(one_minus_t * p);
  if (gens.empty()) return {};
  std::vector<Polynomial> out;
  for (auto& p : buchberger(gens, caps)) {
    bool has_t = false;
    for (const auto& term : p.terms()) has_t = has_t || term.m.exponent(t) > 0;
    if (!has_t) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace robustci
