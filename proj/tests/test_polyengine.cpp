#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "robustci/polynomial.hpp"

using namespace robustci;

namespace {

// Variables for the 2x2 layout: p(i, x) with rows i = 1..3 and columns x = 0..1.
Var pv(int i, int x) { return static_cast<Var>((i - 1) * 2 + x); }
Polynomial P(int i, int x) { return Polynomial::var(pv(i, x)); }

// f^{ij}_{xy} = p_{ix} p_{jy} - p_{iy} p_{jx}
Polynomial minor(int i, int j, int x = 0, int y = 1) { return P(i, x) * P(j, y) - P(i, y) * P(j, x); }

Rational eval(const Polynomial& p, const std::map<Var, Rational>& at) {
  Rational s = 0;
  for (const auto& t : p.terms()) {
    Rational v = t.c;
    for (const auto& [var, e] : t.m.factors())
      for (std::uint32_t k = 0; k < e; ++k) v *= at.at(var);
    s += v;
  }
  return s;
}

Polynomial random_poly(std::mt19937_64& rng, Var nvars, int nterms, int maxdeg) {
  std::vector<Term> ts;
  for (int t = 0; t < nterms; ++t) {
    std::vector<Monomial::Factor> f;
    const int deg = static_cast<int>(rng() % static_cast<unsigned>(maxdeg + 1));
    for (int k = 0; k < deg; ++k) f.push_back({static_cast<Var>(rng() % nvars), 1});
    ts.push_back({Monomial(f), Rational(static_cast<long>(rng() % 7) - 3)});
  }
  return Polynomial(ts);
}

std::vector<Polynomial> sorted(std::vector<Polynomial> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Monomial, CanonicalFactors) {
  const Monomial m({{1, 1}, {3, 2}, {1, 1}, {2, 0}});
  ASSERT_EQ(m.factors().size(), 2u);
  EXPECT_EQ(m.factors()[0], (Monomial::Factor{3, 2}));
  EXPECT_EQ(m.exponent(1), 2u);
  EXPECT_EQ(m.degree(), 4u);
  EXPECT_FALSE(m.square_free());
  EXPECT_TRUE(Monomial::var(2).divides(m) == false);
  EXPECT_TRUE(Monomial::var(3).divides(m));
  EXPECT_EQ(m / Monomial::var(3), Monomial({{3, 1}, {1, 2}}));
  EXPECT_THROW(m / Monomial::var(0), contract_error);
  EXPECT_EQ(lcm(Monomial({{1, 2}}), Monomial({{1, 1}, {0, 1}})), Monomial({{1, 2}, {0, 1}}));
  EXPECT_TRUE(Monomial::var(1).coprime(Monomial::var(2)));
}

TEST(Monomial, LexWithHigherVariablesFirst) {
  EXPECT_LT(Monomial::var(0, 5), Monomial::var(1));
  EXPECT_LT(Monomial({{2, 1}, {0, 1}}), Monomial({{2, 1}, {1, 1}}));
  EXPECT_LT(Monomial(), Monomial::var(0));
  EXPECT_LT(Monomial::var(1), Monomial({{1, 1}, {0, 1}}));
}

TEST(Polynomial, NormalizedRepresentation) {
  const Polynomial p({{Monomial::var(0), 2}, {Monomial::var(1), 1}, {Monomial::var(0), -2}});
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.lm(), Monomial::var(1));
  EXPECT_TRUE((P(1, 0) - P(1, 0)).is_zero());
  EXPECT_THROW(Polynomial().leading(), contract_error);
  const auto m = minor(1, 2);
  EXPECT_EQ(m.lm(), Monomial({{pv(2, 1), 1}, {pv(1, 0), 1}}));
  EXPECT_EQ(m.lc(), 1);
  EXPECT_EQ((m * Polynomial::constant(-3)).monic(), m);
}

TEST(Polynomial, ArithmeticAgreesWithEvaluation) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_poly(rng, 4, 5, 3), b = random_poly(rng, 4, 4, 2);
    std::map<Var, Rational> at;
    for (Var v = 0; v < 4; ++v) {
      Rational r(static_cast<long>(rng() % 11) - 5, static_cast<long>(1 + rng() % 4));
      r.canonicalize();
      at[v] = r;
    }
    EXPECT_EQ(eval(a + b, at), eval(a, at) + eval(b, at));
    EXPECT_EQ(eval(a - b, at), eval(a, at) - eval(b, at));
    EXPECT_EQ(eval(a * b, at), eval(a, at) * eval(b, at));
  }
}

TEST(Format, Text) {
  EXPECT_EQ(format_polynomial(Polynomial()), "0");
  EXPECT_EQ(format_polynomial(Polynomial::constant(Rational(-1, 2))), "-1/2");
  const auto s = format_polynomial(minor(1, 2));
  EXPECT_NE(s.find("v3*v0"), std::string::npos) << s;
  EXPECT_NE(s.find(" - "), std::string::npos) << s;
}

TEST(Reduce, Examples) {
  const auto g = minor(1, 2);
  EXPECT_TRUE(reduce(g, {g}).is_zero());
  EXPECT_EQ(reduce(g, {P(1, 0)}), Polynomial::constant(-1) * P(1, 1) * P(2, 0));
  EXPECT_EQ(reduce(P(3, 1), {g}), P(3, 1));
}

TEST(Reduce, RemainderIsReducedAndCongruent) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    std::vector<Polynomial> basis;
    for (int k = 0; k < 3; ++k) {
      auto b = random_poly(rng, 4, 2, 2);
      if (!b.is_zero()) basis.push_back(b);
    }
    if (basis.empty()) continue;
    const auto f = random_poly(rng, 4, 6, 3);
    const auto r = reduce(f, basis);
    for (const auto& term : r.terms())
      for (const auto& b : basis) EXPECT_FALSE(b.lm().divides(term.m));
    EXPECT_TRUE(ideal_membership(f - r, buchberger(basis)));
    EXPECT_EQ(reduce(r, basis), r);
  }
}

TEST(Reduce, BinomialsStayBinomials) {
  std::mt19937_64 rng(3);
  std::vector<Polynomial> basis{minor(1, 2), minor(1, 3), minor(2, 3, 0, 1)};
  for (int t = 0; t < 100; ++t) {
    auto mono = [&] {
      std::vector<Monomial::Factor> f;
      for (int k = 0; k < 3; ++k) f.push_back({static_cast<Var>(rng() % 6), 1});
      return Monomial(f);
    };
    const Polynomial b({{mono(), 1}, {mono(), -1}});
    EXPECT_LE(reduce(b, basis).size(), 2u);
  }
}

TEST(SPolynomial, Examples) {
  const auto f = minor(1, 2);
  EXPECT_TRUE(s_polynomial(f, f).is_zero());
  const auto g = minor(3, 3, 0, 0) + P(3, 0);  // p_{3,0}: coprime with lm(f)
  EXPECT_TRUE(reduce(s_polynomial(f, g), {f, g}).is_zero());
  // f^{13} and f^{23} share p_{3y} in their leading terms
  const auto s = s_polynomial(minor(1, 3), minor(2, 3));
  const auto expect = P(1, 0) * P(2, 1) * P(3, 0) - P(1, 1) * P(2, 0) * P(3, 0);
  EXPECT_EQ(s, expect);
  EXPECT_THROW(s_polynomial(f, Polynomial()), input_error);
}

TEST(Buchberger, SingleBinomialIsItsOwnBasis) {
  const auto f = minor(1, 2);
  EXPECT_EQ(buchberger({f}), std::vector<Polynomial>{f});
  EXPECT_EQ(buchberger({Polynomial::constant(-2) * f}), std::vector<Polynomial>{f});
  EXPECT_THROW(buchberger({Polynomial()}), input_error);
}

TEST(Buchberger, ThreeVertexGraph) {
  // edges {1,3}, {2,3}
  const auto gb = buchberger({minor(1, 3), minor(2, 3)});
  ASSERT_EQ(gb.size(), 3u);
  EXPECT_NE(std::find(gb.begin(), gb.end(), minor(1, 3)), gb.end());
  EXPECT_NE(std::find(gb.begin(), gb.end(), minor(2, 3)), gb.end());
  EXPECT_NE(std::find(gb.begin(), gb.end(), P(3, 0) * minor(1, 2)), gb.end());
  EXPECT_TRUE(buchberger_criterion(gb));
  for (std::size_t i = 0; i + 1 < gb.size(); ++i) EXPECT_LT(gb[i].lm(), gb[i + 1].lm());
}

TEST(Buchberger, CompleteGraphMinors) {
  // all 2x2 minors of a 3x2 matrix are already a reduced basis
  const std::vector<Polynomial> gens{minor(1, 2), minor(1, 3), minor(2, 3)};
  EXPECT_EQ(sorted(buchberger(gens)), sorted(gens));
}

TEST(Buchberger, InputOrderInvariance) {
  std::mt19937_64 rng(4);
  std::vector<Polynomial> gens{minor(1, 3), minor(2, 3), minor(1, 2) + P(3, 1) * P(3, 1)};
  const auto ref = buchberger(gens);
  for (int t = 0; t < 6; ++t) {
    std::shuffle(gens.begin(), gens.end(), rng);
    auto scaled = gens;
    scaled[0] = scaled[0] * Polynomial::constant(Rational(static_cast<long>(t + 2)));
    EXPECT_EQ(buchberger(scaled), ref);
  }
}

TEST(Buchberger, BinomialClosureStats) {
  const auto res = buchberger_with_stats({minor(1, 3), minor(2, 3), minor(1, 2, 0, 1)});
  EXPECT_EQ(res.stats.non_binomial_remainders, 0u);
  EXPECT_TRUE(buchberger_criterion(res.basis));
}

TEST(Buchberger, Caps) {
  GroebnerCaps caps;
  caps.max_spairs = 0;
  EXPECT_THROW(buchberger({minor(1, 3), minor(2, 3)}, caps), resource_error);
  GroebnerCaps terms;
  terms.max_terms = 1;
  EXPECT_THROW(reduce(minor(1, 2) * minor(1, 3), {P(3, 0) + P(2, 0)}, terms), resource_error);
}

TEST(Criterion, Examples) {
  const auto f = minor(1, 2);
  // S(f, p_{1x}) = -p_{1y} p_{2x} has no divisor among the leading terms
  EXPECT_FALSE(buchberger_criterion({f, P(1, 0)}));
  EXPECT_TRUE(buchberger_criterion({f, P(1, 0), P(1, 1) * P(2, 0)}));
  EXPECT_FALSE(buchberger_criterion({minor(1, 3), minor(2, 3)}));
}

TEST(Membership, Examples) {
  const auto gb = buchberger({minor(1, 3), minor(2, 3)});
  for (const auto& g : gb) EXPECT_TRUE(ideal_membership(g, gb));
  EXPECT_FALSE(ideal_membership(Polynomial::constant(1), gb));
  EXPECT_TRUE(ideal_membership(P(2, 1) * minor(1, 3) - P(1, 0) * minor(2, 3), gb));
  EXPECT_THROW(ideal_membership(P(1, 0), {minor(1, 3), minor(2, 3)}), contract_error);
}

TEST(Bidegree, Examples) {
  const auto b = bidegree(Monomial({{pv(1, 0), 1}, {pv(2, 1), 1}}), 2);
  EXPECT_EQ(b.rows, (std::map<int, std::uint32_t>{{1, 1}, {2, 1}}));
  EXPECT_EQ(b.cols, (std::map<std::size_t, std::uint32_t>{{0, 1}, {1, 1}}));
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) EXPECT_TRUE(bihomogeneous(minor(i, j), 2));
  EXPECT_FALSE(bihomogeneous(P(1, 0) + P(2, 0), 2));
  EXPECT_THROW(bidegree(Monomial(), 0), input_error);
}

TEST(Bidegree, Additive) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_poly(rng, 6, 1, 3), b = random_poly(rng, 6, 1, 3);
    if (a.is_zero() || b.is_zero()) continue;
    const auto da = bidegree(a.lm(), 2), db = bidegree(b.lm(), 2), dab = bidegree(a.lm() * b.lm(), 2);
    for (const auto& [r, e] : dab.rows) EXPECT_EQ(e, (da.rows.count(r) ? da.rows.at(r) : 0) + (db.rows.count(r) ? db.rows.at(r) : 0));
    for (const auto& [c, e] : dab.cols) EXPECT_EQ(e, (da.cols.count(c) ? da.cols.at(c) : 0) + (db.cols.count(c) ? db.cols.at(c) : 0));
  }
}

TEST(Intersection, MonomialIdeals) {
  // (x^a) cap (y^b ...) of monomial ideals is generated by pairwise lcms
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    std::vector<Polynomial> i, j, lcms;
    for (int k = 0; k < 2; ++k) {
      i.push_back(Polynomial({{Monomial({{static_cast<Var>(rng() % 3), 1 + static_cast<std::uint32_t>(rng() % 2)}}), 1}}));
      j.push_back(Polynomial({{Monomial({{static_cast<Var>(rng() % 3), 1 + static_cast<std::uint32_t>(rng() % 2)}}), 1}}));
    }
    for (const auto& a : i)
      for (const auto& b : j) lcms.push_back(Polynomial({{lcm(a.lm(), b.lm()), 1}}));
    EXPECT_EQ(intersect_ideals(i, j), buchberger(lcms));
  }
}

TEST(Intersection, BinomialWithMonomial) {
  const auto f = minor(1, 2);
  // f is prime-like here: (f) cap (p_{3,0}) = (p_{3,0} f)
  EXPECT_EQ(intersect_ideals({f}, {P(3, 0)}), buchberger({P(3, 0) * f}));
  // containment: (f) cap (f, p_{1,0}) = (f)
  EXPECT_EQ(intersect_ideals({f}, {f, P(1, 0)}), buchberger({f}));
}
