#pragma once

// Functional modalities (one kernel per knocked-in subset A), their Gibbs
// potentials via Moebius inversion over the subset lattice, pointwise
// robustness, and the k-interaction decomposition.
//
// Subsets of inputs are bitmasks: bit i-1 stands for input i. A kernel table
// for A is row-major over (x_A, x0) where x_A is indexed in lexicographic
// order over the coordinates of A in increasing input order.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "robustci/error.hpp"
#include "robustci/model.hpp"
#include "robustci/rational.hpp"

namespace robustci {

using Mask = std::uint32_t;

inline constexpr double kKernelTolerance = 1e-9;
inline constexpr double kRowSumTolerance = 1e-12;

inline Mask full_mask(int n) { return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1; }

inline Mask mask_of(const Subset& s) {
  Mask m = 0;
  for (int i : s) m |= Mask{1} << (i - 1);
  return m;
}

inline Subset subset_of(Mask m) {
  Subset s;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1) s.push_back(i + 1);
  return s;
}

inline int popcount(Mask m) { return std::popcount(m); }

// Tables indexed by subsets A of the inputs, each over X_A x X_0.
class SubsetTables {
 public:
  SubsetTables(int d0, std::vector<int> d) : d0_(d0), d_(std::move(d)) {
    if (d0_ < 2) throw input_error("d0 must be >= 2");
    if (d_.empty() || d_.size() > 16) throw input_error("modalities support 1..16 inputs");
    for (int di : d_)
      if (di < 1) throw input_error("input alphabet sizes must be >= 1");
    tables_.resize(std::size_t{1} << d_.size());
    for (Mask a = 0; a < tables_.size(); ++a) tables_[a].assign(num_rows(a) * static_cast<std::size_t>(d0_), 0.0);
  }

  int num_inputs() const { return static_cast<int>(d_.size()); }
  int output_size() const { return d0_; }
  const std::vector<int>& input_sizes() const { return d_; }
  Mask all() const { return full_mask(num_inputs()); }

  std::size_t num_rows(Mask a) const {
    std::size_t r = 1;
    for (std::size_t i = 0; i < d_.size(); ++i)
      if (a & (Mask{1} << i)) r *= static_cast<std::size_t>(d_[i]);
    return r;
  }

  // Row of x|_A, where x is a full configuration.
  std::size_t row_of(Mask a, const Config& x) const {
    if (x.size() != d_.size()) throw input_error("configuration length does not match the number of inputs");
    std::size_t r = 0;
    for (std::size_t i = 0; i < d_.size(); ++i)
      if (a & (Mask{1} << i)) {
        if (x[i] < 1 || x[i] > d_[i]) throw input_error("letter out of range");
        r = r * static_cast<std::size_t>(d_[i]) + static_cast<std::size_t>(x[i] - 1);
      }
    return r;
  }

  // The letters of x_A for a given row.
  Config partial_config(Mask a, std::size_t row) const {
    Config y;
    for (std::size_t i = d_.size(); i-- > 0;)
      if (a & (Mask{1} << i)) {
        const auto di = static_cast<std::size_t>(d_[i]);
        y.push_back(static_cast<int>(row % di) + 1);
        row /= di;
      }
    std::reverse(y.begin(), y.end());
    return y;
  }

  std::size_t row_of_partial(Mask a, const Config& y) const {
    const Subset s = subset_of(a);
    if (y.size() != s.size()) throw input_error("partial configuration has the wrong length");
    std::size_t r = 0;
    for (std::size_t t = 0; t < s.size(); ++t) {
      const int di = d_[static_cast<std::size_t>(s[t] - 1)];
      if (y[t] < 1 || y[t] > di) throw input_error("letter out of range");
      r = r * static_cast<std::size_t>(di) + static_cast<std::size_t>(y[t] - 1);
    }
    return r;
  }

  const std::vector<double>& table(Mask a) const { return tables_.at(a); }
  std::vector<double>& table(Mask a) { return tables_.at(a); }

  double at(Mask a, std::size_t row, int x0) const {
    return tables_.at(a).at(row * static_cast<std::size_t>(d0_) + static_cast<std::size_t>(x0 - 1));
  }
  double& at(Mask a, std::size_t row, int x0) {
    return tables_.at(a).at(row * static_cast<std::size_t>(d0_) + static_cast<std::size_t>(x0 - 1));
  }

  // All full configurations in lexicographic order.
  std::vector<Config> configurations() const {
    return StateSpace(d0_, d_).partial_configs(subset_of(all()));
  }

 private:
  int d0_;
  std::vector<int> d_;
  std::vector<std::vector<double>> tables_;
};

class FunctionalModalities : public SubsetTables {
 public:
  using SubsetTables::SubsetTables;

  bool strictly_positive() const {
    for (Mask a = 0; a <= all(); ++a)
      for (double v : table(a))
        if (!(v > 0)) return false;
    return true;
  }

  // Every row is a probability vector within kRowSumTolerance.
  bool rows_normalized(double tol = kRowSumTolerance) const {
    for (Mask a = 0; a <= all(); ++a)
      for (std::size_t r = 0; r < num_rows(a); ++r) {
        double s = 0;
        for (int x0 = 1; x0 <= output_size(); ++x0) {
          const double v = at(a, r, x0);
          if (!(v >= 0) || !std::isfinite(v)) return false;
          s += v;
        }
        if (std::abs(s - 1.0) > tol) return false;
      }
    return true;
  }
};

class GibbsPotentials : public SubsetTables {
 public:
  using SubsetTables::SubsetTables;
};

// phi_A(x_A, x0) = sum_{C subset A} (-1)^{|A \ C|} ln kappa_C(x_C; x0),
// summed over submasks in increasing order.
inline GibbsPotentials moebius_potentials(const FunctionalModalities& mods) {
  if (!mods.strictly_positive()) throw domain_error("positivity required: Moebius inversion takes logarithms");
  GibbsPotentials pots(mods.output_size(), mods.input_sizes());
  const auto configs = mods.configurations();
  for (Mask a = 0; a <= mods.all(); ++a) {
    std::vector<Mask> subs;
    for (Mask c = a;; c = (c - 1) & a) {
      subs.push_back(c);
      if (c == 0) break;
    }
    std::sort(subs.begin(), subs.end());
    std::vector<std::uint8_t> done(mods.num_rows(a), 0);
    for (const Config& x : configs) {
      const std::size_t row = mods.row_of(a, x);
      if (done[row]) continue;
      done[row] = 1;
      for (int x0 = 1; x0 <= mods.output_size(); ++x0) {
        double acc = 0;
        for (Mask c : subs) {
          const double term = std::log(mods.at(c, mods.row_of(c, x), x0));
          acc += (popcount(a & ~c) % 2 ? -term : term);
        }
        pots.at(a, row, x0) = acc;
      }
    }
  }
  return pots;
}

// Sum_{B subset A} phi_B(x|_B, x0) for every x0.
inline std::vector<double> potential_sum(const GibbsPotentials& pots, Mask a, const Config& x) {
  std::vector<double> s(static_cast<std::size_t>(pots.output_size()), 0.0);
  std::vector<Mask> subs;
  for (Mask b = a;; b = (b - 1) & a) {
    subs.push_back(b);
    if (b == 0) break;
  }
  std::sort(subs.begin(), subs.end());
  for (Mask b : subs)
    for (int x0 = 1; x0 <= pots.output_size(); ++x0) {
      const double v = pots.at(b, pots.row_of(b, x), x0);
      if (std::isnan(v)) throw input_error("NaN potential");
      s[static_cast<std::size_t>(x0 - 1)] += v;
    }
  return s;
}

namespace detail {
inline std::vector<double> softmax(std::vector<double> s) {
  const double mx = *std::max_element(s.begin(), s.end());
  double z = 0;
  for (auto& v : s) {
    v = std::exp(v - mx);
    z += v;
  }
  for (auto& v : s) v /= z;
  return s;
}
}  // namespace detail

// kappa_A(x_A; x0) proportional to exp(sum_{B subset A} phi_B), with the
// maximum subtracted before exponentiation. Table layout as in SubsetTables.
inline std::vector<double> gibbs_kernel(const GibbsPotentials& pots, Mask a) {
  std::vector<double> out(pots.num_rows(a) * static_cast<std::size_t>(pots.output_size()));
  std::vector<std::uint8_t> done(pots.num_rows(a), 0);
  for (const Config& x : pots.configurations()) {
    const std::size_t row = pots.row_of(a, x);
    if (done[row]) continue;
    done[row] = 1;
    const auto k = detail::softmax(potential_sum(pots, a, x));
    std::copy(k.begin(), k.end(), out.begin() + static_cast<std::ptrdiff_t>(row * k.size()));
  }
  return out;
}

inline FunctionalModalities gibbs_modalities(const GibbsPotentials& pots) {
  FunctionalModalities mods(pots.output_size(), pots.input_sizes());
  for (Mask a = 0; a <= pots.all(); ++a) mods.table(a) = gibbs_kernel(pots, a);
  return mods;
}

// Largest absolute entrywise difference over all kernels.
inline double sup_distance(const SubsetTables& a, const SubsetTables& b) {
  double d = 0;
  for (Mask m = 0; m <= a.all(); ++m)
    for (std::size_t i = 0; i < a.table(m).size(); ++i) d = std::max(d, std::abs(a.table(m)[i] - b.table(m)[i]));
  return d;
}

// kappa_[n](x; .) == kappa_R(x|_R; .) with R the complement of the knocked-out set S.
inline bool check_robust_at(const FunctionalModalities& mods, const Config& x, Mask knocked_out,
                            double tol = kKernelTolerance) {
  const Mask full = mods.all(), r = full & ~knocked_out;
  const std::size_t row_full = mods.row_of(full, x), row_r = mods.row_of(r, x);
  for (int x0 = 1; x0 <= mods.output_size(); ++x0)
    if (std::abs(mods.at(full, row_full, x0) - mods.at(r, row_r, x0)) > tol) return false;
  return true;
}

// R_k-robust at x: robust against every knockout of at most n-k inputs.
inline bool is_rk_robust_at(const FunctionalModalities& mods, const Config& x, int k, double tol = kKernelTolerance) {
  const int n = mods.num_inputs();
  for (Mask s = 0; s <= mods.all(); ++s)
    if (popcount(s) <= n - k && !check_robust_at(mods, x, s, tol)) return false;
  return true;
}

// Sum over B not inside R of phi_B(x|_B, x0) is constant in x0.
inline bool potential_robustness_criterion(const GibbsPotentials& pots, const Config& x, Mask knocked_out,
                                           double tol = kKernelTolerance) {
  std::vector<double> v(static_cast<std::size_t>(pots.output_size()), 0.0);
  for (Mask b = 0; b <= pots.all(); ++b) {
    if ((b & knocked_out) == 0) continue;
    for (int x0 = 1; x0 <= pots.output_size(); ++x0) v[static_cast<std::size_t>(x0 - 1)] += pots.at(b, pots.row_of(b, x), x0);
  }
  double mean = 0;
  for (double t : v) mean += t;
  mean /= static_cast<double>(v.size());
  return std::all_of(v.begin(), v.end(), [&](double t) { return std::abs(t - mean) <= tol; });
}

namespace detail {
inline Rational binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}
inline int sign_pow(int e) { return e % 2 == 0 ? 1 : -1; }
}  // namespace detail

// Weight of ln kappa_C in phi_A for |A| = a, |C| = c under k-interactions.
inline Rational alpha_coefficient(int a, int c, int k) {
  if (c < 0 || a < c) throw input_error("alpha coefficient needs 0 <= c <= a");
  if (c > k) throw input_error("alpha coefficient needs c <= k");
  if (c < k) return Rational(detail::sign_pow(a - c));
  Rational sum = 0;
  for (int r = 0; r <= a - k; ++r)
    sum += detail::binomial(a - k, r) * detail::sign_pow(a - r - k) / detail::binomial(r + k, k);
  return sum;
}

// Psi_{C,A} tables for C subset A with |C| <= k, each over X_C x X_0.
class KInteractionDecomposition {
 public:
  KInteractionDecomposition(int k, int d0, std::vector<int> d) : k_(k), layout_(d0, std::move(d)) {}

  int k() const { return k_; }
  const SubsetTables& layout() const { return layout_; }

  std::vector<double>& psi(Mask c, Mask a) { return psi_[{c, a}]; }
  const std::vector<double>& psi(Mask c, Mask a) const { return psi_.at({c, a}); }
  const std::map<std::pair<Mask, Mask>, std::vector<double>>& entries() const { return psi_; }

  double at(Mask c, Mask a, const Config& x, int x0) const {
    return psi(c, a).at(layout_.row_of(c, x) * static_cast<std::size_t>(layout_.output_size()) +
                        static_cast<std::size_t>(x0 - 1));
  }

  // sum_{C subset A, |C| <= k} Psi_{C,A}(x|_C; x0)
  std::vector<double> reconstruct(Mask a, const Config& x) const {
    std::vector<double> s(static_cast<std::size_t>(layout_.output_size()), 0.0);
    for (const auto& [key, table] : psi_) {
      if (key.second != a) continue;
      for (int x0 = 1; x0 <= layout_.output_size(); ++x0) s[static_cast<std::size_t>(x0 - 1)] += at(key.first, a, x, x0);
    }
    return s;
  }

 private:
  int k_;
  SubsetTables layout_;
  std::map<std::pair<Mask, Mask>, std::vector<double>> psi_;
};

inline KInteractionDecomposition k_interaction_decompose(const FunctionalModalities& mods, int k) {
  if (k < 0 || k > mods.num_inputs()) throw input_error("k must lie in 0..n");
  if (!mods.strictly_positive()) throw domain_error("positivity required for the k-interaction decomposition");
  KInteractionDecomposition dec(k, mods.output_size(), mods.input_sizes());
  for (Mask a = 0; a <= mods.all(); ++a)
    for (Mask c = a;; c = (c - 1) & a) {
      if (popcount(c) <= k) {
        const double alpha = alpha_coefficient(popcount(a), popcount(c), k).get_d();
        auto& t = dec.psi(c, a);
        t = mods.table(c);
        for (auto& v : t) v = alpha * std::log(v);
      }
      if (c == 0) break;
    }
  return dec;
}

// kappa^eps = (1 - eps) kappa + eps / d0
inline FunctionalModalities positive_mixture(const FunctionalModalities& mods, double eps) {
  if (!(eps > 0 && eps <= 1)) throw input_error("mixture weight eps must lie in (0, 1]");
  FunctionalModalities out = mods;
  const double uniform = 1.0 / mods.output_size();
  for (Mask a = 0; a <= mods.all(); ++a)
    for (auto& v : out.table(a)) v = (1 - eps) * v + eps * uniform;
  return out;
}

struct TildeReport {
  bool lower_ok = true;  // family with |B| < k
  bool top_ok = true;    // weighted family with |B| = k
  std::string first_failure;
  bool ok() const { return lower_ok && top_ok; }
};

// Lower family: (-1)^{|A|} Psi_{B,A} == (-1)^{|A'|} Psi_{B,A'} for |B| < k.
// Top family, evaluated exactly as displayed in the source:
//   w(|A'|) Psi_{B,A} == w(|A|) Psi_{B,A'},  w(m) = sum_{l=0}^{m-k} (-1)^{m-l} / binom(l+k, k).
inline TildeReport check_tilde_constraints(const KInteractionDecomposition& dec, double tol = kKernelTolerance) {
  TildeReport rep;
  const auto& lay = dec.layout();
  const int k = dec.k();
  auto weight = [k](int m) {
    Rational s = 0;
    for (int l = 0; l <= m - k; ++l) s += Rational(detail::sign_pow(m - l)) / detail::binomial(l + k, k);
    return s.get_d();
  };
  for (Mask b = 0; b <= lay.all(); ++b) {
    const int nb = popcount(b);
    if (nb > k) continue;
    std::vector<Mask> supersets;
    for (Mask a = 0; a <= lay.all(); ++a)
      if ((a & b) == b) supersets.push_back(a);
    for (std::size_t i = 0; i < supersets.size(); ++i)
      for (std::size_t j = i + 1; j < supersets.size(); ++j) {
        const Mask a = supersets[i], ap = supersets[j];
        const auto& ta = dec.psi(b, a);
        const auto& tap = dec.psi(b, ap);
        double ca, cap;
        if (nb < k) {
          ca = detail::sign_pow(popcount(a));
          cap = detail::sign_pow(popcount(ap));
        } else {
          ca = weight(popcount(ap));
          cap = weight(popcount(a));
        }
        for (std::size_t t = 0; t < ta.size(); ++t)
          if (std::abs(ca * ta[t] - cap * tap[t]) > tol) {
            auto& flag = nb < k ? rep.lower_ok : rep.top_ok;
            if (flag && rep.first_failure.empty())
              rep.first_failure = std::string(nb < k ? "lower" : "top") + " family: B=" +
                                  format_config(subset_of(b)) + " A=" + format_config(subset_of(a)) +
                                  " A'=" + format_config(subset_of(ap));
            flag = false;
            break;
          }
      }
  }
  return rep;
}

// Binary neuron: input letters 1,2 stand for -1,+1 and output letter 2 is +1.
// kappa_A(x_A; +1) = 1 / (1 + exp(-sum_{i in A} w_i x_i)).
inline FunctionalModalities neuron_modalities(const std::vector<double>& weights) {
  const int n = static_cast<int>(weights.size());
  FunctionalModalities mods(2, std::vector<int>(static_cast<std::size_t>(n), 2));
  for (Mask a = 0; a <= mods.all(); ++a)
    for (std::size_t row = 0; row < mods.num_rows(a); ++row) {
      const Config y = mods.partial_config(a, row);
      const Subset s = subset_of(a);
      double field = 0;
      for (std::size_t t = 0; t < s.size(); ++t)
        field += weights[static_cast<std::size_t>(s[t] - 1)] * (y[t] == 2 ? 1.0 : -1.0);
      const auto k = detail::softmax({-field / 2, field / 2});
      mods.at(a, row, 1) = k[0];
      mods.at(a, row, 2) = k[1];
    }
  return mods;
}

// Two binary inputs, R_1-robust exactly on the diagonal {(1,1),(2,2)}: free
// phi_empty, phi_{1}, off-diagonal phi_{12}; the rest is forced by
// phi_{12}(x,x) = -phi_{1}(x) and phi_{2}(x) = phi_{1}(x).
inline FunctionalModalities diagonal_robust_example(int d0, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GibbsPotentials pots(d0, {2, 2});
  for (int x0 = 1; x0 <= d0; ++x0) {
    pots.at(0b00, 0, x0) = u(rng);
    for (std::size_t r = 0; r < 2; ++r) pots.at(0b01, r, x0) = u(rng);
    pots.at(0b11, pots.row_of_partial(0b11, {1, 2}), x0) = u(rng);
    pots.at(0b11, pots.row_of_partial(0b11, {2, 1}), x0) = u(rng);
    for (int v = 1; v <= 2; ++v) {
      const double p1 = pots.at(0b01, static_cast<std::size_t>(v - 1), x0);
      pots.at(0b11, pots.row_of_partial(0b11, {v, v}), x0) = -p1;
      pots.at(0b10, static_cast<std::size_t>(v - 1), x0) = p1;
    }
  }
  return gibbs_modalities(pots);
}

}  // namespace robustci
