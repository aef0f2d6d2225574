#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "fge/common.hpp"
#include "fge/groups.hpp"

// Exact combinatorial energies and Gowers-type norms.
//
// E(A,B) counts quadruples (a,a1,b,b1) in A^2 x B^2 with a^{-1} b = a1^{-1} b1,
// evaluated as sum_x r_{A^{-1}B}(x)^2.  The k-th left/right moments use
// r_{A^{-1}A} and r_{A A^{-1}} respectively.  The non-normalized Gowers norm
//
//   U^k(A) = sum_{x_0..x_k} prod_{eps in {0,1}^k} A(x_0 x_1^{eps_1} ... x_k^{eps_k})
//
// is computed either by direct enumeration (work-gated) or through the fiber
// recursion U^{k+1}(A) = sum_{s in A^{-1}A} U^k(A cap As^{-1}).  All counts are
// exact big integers.

namespace fge {

struct GroupFunction {
  const FiniteGroup* group = nullptr;
  std::vector<std::complex<double>> values;

  GroupFunction() = default;
  GroupFunction(const FiniteGroup& g)
      : group(&g), values(static_cast<std::size_t>(g.order()), 0.0) {}

  static GroupFunction indicator(const Subset& a) {
    GroupFunction f(*a.group);
    for (int x : a.members) f.values[static_cast<std::size_t>(x)] = 1.0;
    return f;
  }
  static GroupFunction delta(const FiniteGroup& g, int x) {
    GroupFunction f(g);
    f.values[static_cast<std::size_t>(x)] = 1.0;
    return f;
  }
  static GroupFunction random_complex(const FiniteGroup& g, Rng& rng) {
    GroupFunction f(g);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : f.values) v = {u(rng), u(rng)};
    return f;
  }
  std::complex<double> sum() const {
    std::complex<double> s = 0.0;
    for (const auto& v : values) s += v;
    return s;
  }
};

enum class PairMode { Mul, InvMul, MulInv };

// r[x] = #{(a,b) in A x B : a*b = x} (Mul), a^{-1}*b = x (InvMul),
// or a*b^{-1} = x (MulInv).
inline std::vector<std::uint64_t> r_counts(const Subset& a, const Subset& b,
                                           PairMode mode) {
  require_same_group(a, b);
  const FiniteGroup& g = *a.group;
  std::vector<std::uint64_t> r(static_cast<std::size_t>(g.order()), 0);
  for (int x : a.members) {
    const int xa = mode == PairMode::InvMul ? g.inverse(x) : x;
    for (int y : b.members) {
      const int yb = mode == PairMode::MulInv ? g.inverse(y) : y;
      ++r[static_cast<std::size_t>(g.mul(xa, yb))];
    }
  }
  return r;
}

inline Count energy(const Subset& a, const Subset& b) {
  const auto r = r_counts(a, b, PairMode::InvMul);
  Count total = 0;
  for (std::uint64_t v : r)
    if (v) total += Count(v) * v;
  return total;
}

inline Count energy(const Subset& a) { return energy(a, a); }

enum class Side { Left, Right };

// E^L_k(A) = #{(a_1..a_k, b_1..b_k) : a_1^{-1} b_1 = ... = a_k^{-1} b_k};
// the right-handed variant equates b_j a_j^{-1} instead.  The two agree
// for k = 2 but may differ for k >= 3 in non-abelian groups.
inline Count energy_moment(const Subset& a, int k, Side side) {
  if (k < 1) throw ValidationError("energy_moment: k >= 1");
  const auto r = r_counts(a, a, side == Side::Left ? PairMode::InvMul
                                                   : PairMode::MulInv);
  Count total = 0;
  for (std::uint64_t v : r) {
    if (v == 0) continue;
    Count term = v;
    for (int i = 1; i < k; ++i) term *= v;
    total += term;
  }
  return total;
}

// A_s = A cap As^{-1}, i.e. {x in A : xs in A}.
inline Subset fiber1(const Subset& a, int s) {
  const FiniteGroup& g = *a.group;
  const auto m = a.mask();
  std::vector<int> out;
  for (int x : a.members)
    if (m[static_cast<std::size_t>(g.mul(x, s))]) out.push_back(x);
  return Subset(g, std::move(out));
}

// A_{(s_1..s_k)}(x) = prod_{eps} A(x s_1^{eps_1} ... s_k^{eps_k}); built by
// peeling shifts from the last coordinate inward, which is exact in
// non-abelian groups as well.
inline Subset fiber(const Subset& a, const std::vector<int>& shifts) {
  Subset b = a;
  for (std::size_t j = shifts.size(); j-- > 0;) b = fiber1(b, shifts[j]);
  return b;
}

namespace detail {

inline Count pow_count(Count base, int e) {
  Count r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

inline void fiber_sum_rec(const Subset& a, int level, int pow, Count& acc) {
  if (level == 0) {
    acc += pow_count(a.size(), pow);
    return;
  }
  const FiniteGroup& g = *a.group;
  for (int s = 0; s < g.order(); ++s) {
    Subset b = fiber1(a, s);
    if (b.empty()) continue;
    fiber_sum_rec(b, level - 1, pow, acc);
  }
}

}  // namespace detail

// sum over all shift tuples s in G^len of |A_s|^pow.  This one engine
// yields U^k (pow = 1, len = k), the squared-fiber identity (pow = 2,
// len = k - 1) and the higher moment sequences E^{(l)}_k.
inline Count fiber_sum_pow(const Subset& a, int len, int pow) {
  if (len < 0 || pow < 1) throw ValidationError("fiber_sum_pow: bad arity");
  const double work = std::pow(static_cast<double>(a.group->order()), len) *
                      std::max(1, a.size());
  if (work > static_cast<double>(work_cap()))
    throw CapacityError("fiber_sum_pow: work exceeds cap");
  if (len == 0) return detail::pow_count(a.size(), pow);
  Count acc = 0;
  detail::fiber_sum_rec(a, len, pow, acc);
  return acc;
}

inline Count moment_sequence(const Subset& v, int k, int l) {
  if (k < 1 || l < 1) throw ValidationError("moment_sequence: k,l >= 1");
  return fiber_sum_pow(v, l, k);
}

enum class GowersMethod { Direct, Recursive };

namespace detail {

inline void gowers_direct_rec(const FiniteGroup& g,
                              const std::vector<std::uint8_t>& in_a,
                              std::vector<int>& prods, int remaining,
                              std::uint64_t& acc) {
  if (remaining == 0) {
    ++acc;
    return;
  }
  const std::size_t half = prods.size();
  prods.resize(half * 2);
  for (int x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (std::size_t i = 0; i < half; ++i) {
      const int q = g.mul(prods[i], x);
      if (!in_a[static_cast<std::size_t>(q)]) {
        ok = false;
        break;
      }
      prods[half + i] = q;
    }
    if (ok) gowers_direct_rec(g, in_a, prods, remaining - 1, acc);
  }
  prods.resize(half);
}

}  // namespace detail

inline Count gowers_direct(const Subset& a, int k) {
  if (k < 1) throw ValidationError("gowers_norm: k >= 1");
  const FiniteGroup& g = *a.group;
  const double work = std::pow(static_cast<double>(g.order()), k + 1);
  if (work > static_cast<double>(work_cap()))
    throw CapacityError(
        "gowers_norm: direct enumeration exceeds the work cap; use the "
        "recursive method");
  const auto in_a = a.mask();
  std::uint64_t acc = 0;
  std::vector<int> prods;
  prods.reserve(static_cast<std::size_t>(1) << k);
  for (int x0 : a.members) {
    prods.assign(1, x0);
    detail::gowers_direct_rec(g, in_a, prods, k, acc);
  }
  return Count(acc);
}

inline Count gowers_recursive(const Subset& a, int k) {
  if (k < 1) throw ValidationError("gowers_norm: k >= 1");
  if (a.empty()) return 0;
  if (k == 1) return Count(a.size()) * a.size();
  const auto r = r_counts(a, a, PairMode::InvMul);
  Count acc = 0;
  for (int s = 0; s < a.group->order(); ++s) {
    if (r[static_cast<std::size_t>(s)] == 0) continue;
    acc += gowers_recursive(fiber1(a, s), k - 1);
  }
  return acc;
}

inline Count gowers_norm(const Subset& a, int k,
                         GowersMethod method = GowersMethod::Recursive) {
  return method == GowersMethod::Direct ? gowers_direct(a, k)
                                        : gowers_recursive(a, k);
}

// <A,B>_k = sum over s in G^k of |A_s| |B_s| (indicator form); k = 0 gives
// |A||B| and k = 1 the common energy on abelian groups.
inline Count scalar_product(const Subset& a, const Subset& b, int k) {
  require_same_group(a, b);
  if (k < 0) throw ValidationError("scalar_product: k >= 0");
  const double work = std::pow(static_cast<double>(a.group->order()), k) *
                      std::max(1, a.size() + b.size());
  if (work > static_cast<double>(work_cap()))
    throw CapacityError("scalar_product: work exceeds cap");
  if (a.empty() || b.empty()) return 0;
  if (k == 0) return Count(a.size()) * b.size();
  Count acc = 0;
  const FiniteGroup& g = *a.group;
  for (int s = 0; s < g.order(); ++s) {
    Subset a1 = fiber1(a, s);
    if (a1.empty()) continue;
    Subset b1 = fiber1(b, s);
    if (b1.empty()) continue;
    acc += scalar_product(a1, b1, k - 1);
  }
  return acc;
}

// <f,g>_k for arbitrary complex functions, following the conjugation rule
// f_s(x) = prod_eps C^{eps_1+..+eps_k} f(x s^eps); for each fixed s the
// (x,t) double sum factorizes into (sum_x f_s)(conj sum_y g_s).
inline std::complex<double> scalar_product(const GroupFunction& f,
                                           const GroupFunction& g, int k) {
  if (f.group == nullptr || f.group != g.group)
    throw ValidationError("scalar_product: functions on different groups");
  if (k < 0) throw ValidationError("scalar_product: k >= 0");
  const FiniteGroup& grp = *f.group;
  const int n = grp.order();
  const double work = std::pow(static_cast<double>(n), k + 1) * (1 << k);
  if (work > static_cast<double>(work_cap()))
    throw CapacityError("scalar_product: work exceeds cap");

  std::vector<int> shifts(static_cast<std::size_t>(k), 0);
  std::complex<double> acc = 0.0;
  auto fiber_sum = [&](const GroupFunction& h) {
    std::complex<double> total = 0.0;
    for (int x = 0; x < n; ++x) {
      std::complex<double> prod = 1.0;
      // iterate epsilon vectors; parity of eps decides conjugation
      for (std::uint32_t eps = 0; eps < (1u << k) && prod != 0.0; ++eps) {
        int pt = x;
        for (int j = 0; j < k; ++j)
          if (eps & (1u << j)) pt = grp.mul(pt, shifts[static_cast<std::size_t>(j)]);
        std::complex<double> val = h.values[static_cast<std::size_t>(pt)];
        if (__builtin_popcount(eps) & 1) val = std::conj(val);
        prod *= val;
      }
      total += prod;
    }
    return total;
  };
  // odometer over shift tuples
  while (true) {
    acc += fiber_sum(f) * std::conj(fiber_sum(g));
    int j = k - 1;
    while (j >= 0 && ++shifts[static_cast<std::size_t>(j)] == n)
      shifts[static_cast<std::size_t>(j--)] = 0;
    if (j < 0) break;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// T_k norms, counting route.
//
// T_k(f_1..f_{2k}) sums, over solutions of
//   x_1 x_2^{-1} x_3 ... x_k^{+-} = y_1 y_2^{-1} ... y_k^{+-},
// the weights prod_j C^j f_j evaluated at the tuple, where C is complex
// conjugation applied to odd-indexed factors.  For indicator inputs the
// conjugation is a no-op and T_2(A) = E(A).

namespace detail {

// Distribution of the alternating product x_1 x_2^{-1} x_3 ... over the
// factor functions fs[first..first+k-1], with the stated conjugation rule.
inline std::vector<std::complex<double>> alternating_chain(
    const std::vector<GroupFunction>& fs, int first, int k) {
  const FiniteGroup& g = *fs[static_cast<std::size_t>(first)].group;
  const int n = g.order();
  std::vector<std::complex<double>> psi(static_cast<std::size_t>(n), 0.0);
  psi[static_cast<std::size_t>(g.identity())] = 1.0;
  for (int local = 1; local <= k; ++local) {
    const int global = first + local;  // 1-based position among the 2k inputs
    const auto& f = fs[static_cast<std::size_t>(first + local - 1)];
    const bool conj_w = (global % 2) == 1;
    const bool inverse_pos = (local % 2) == 0;
    std::vector<std::complex<double>> next(static_cast<std::size_t>(n), 0.0);
    for (int gidx = 0; gidx < n; ++gidx) {
      const std::complex<double> base = psi[static_cast<std::size_t>(gidx)];
      if (base == 0.0) continue;
      for (int y = 0; y < n; ++y) {
        std::complex<double> w = f.values[static_cast<std::size_t>(y)];
        if (w == 0.0) continue;
        if (conj_w) w = std::conj(w);
        const int to = inverse_pos ? g.mul(gidx, g.inverse(y)) : g.mul(gidx, y);
        next[static_cast<std::size_t>(to)] += base * w;
      }
    }
    psi = std::move(next);
  }
  return psi;
}

inline std::vector<std::uint64_t> alternating_chain_counts(
    const std::vector<Subset>& sets, int first, int k) {
  const FiniteGroup& g = *sets[static_cast<std::size_t>(first)].group;
  const int n = g.order();
  std::vector<std::uint64_t> psi(static_cast<std::size_t>(n), 0);
  psi[static_cast<std::size_t>(g.identity())] = 1;
  for (int local = 1; local <= k; ++local) {
    const auto& s = sets[static_cast<std::size_t>(first + local - 1)];
    const bool inverse_pos = (local % 2) == 0;
    std::vector<std::uint64_t> next(static_cast<std::size_t>(n), 0);
    for (int gidx = 0; gidx < n; ++gidx) {
      const std::uint64_t base = psi[static_cast<std::size_t>(gidx)];
      if (base == 0) continue;
      for (int y : s.members) {
        const int to = inverse_pos ? g.mul(gidx, g.inverse(y)) : g.mul(gidx, y);
        next[static_cast<std::size_t>(to)] += base;
      }
    }
    psi = std::move(next);
  }
  return psi;
}

}  // namespace detail

inline Count t_norm_count(const std::vector<Subset>& sets, int k) {
  if (k < 2) throw ValidationError("t_norm: k >= 2");
  if (static_cast<int>(sets.size()) != 2 * k)
    throw ValidationError("t_norm: expected 2k sets");
  for (const auto& s : sets) require_same_group(sets.front(), s);
  const auto lhs = detail::alternating_chain_counts(sets, 0, k);
  const auto rhs = detail::alternating_chain_counts(sets, k, k);
  Count acc = 0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] == 0 || rhs[i] == 0) continue;
    acc += Count(lhs[i]) * rhs[i];
  }
  return acc;
}

inline Count t_norm_count(const Subset& a, int k) {
  return t_norm_count(std::vector<Subset>(static_cast<std::size_t>(2 * k), a), k);
}

inline std::complex<double> t_norm_count(const std::vector<GroupFunction>& fs,
                                         int k) {
  if (k < 2) throw ValidationError("t_norm: k >= 2");
  if (static_cast<int>(fs.size()) != 2 * k)
    throw ValidationError("t_norm: expected 2k functions");
  const auto lhs = detail::alternating_chain(fs, 0, k);
  const auto rhs = detail::alternating_chain(fs, k, k);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) acc += lhs[i] * rhs[i];
  return acc;
}

// ---------------------------------------------------------------------------
// Convolution powers of indicators, and the dyadic level-set selector.

inline std::vector<std::uint64_t> convolution_counts(
    const std::vector<std::uint64_t>& f, const Subset& a) {
  const FiniteGroup& g = *a.group;
  std::vector<std::uint64_t> out(f.size(), 0);
  for (int x = 0; x < static_cast<int>(f.size()); ++x) {
    if (f[static_cast<std::size_t>(x)] == 0) continue;
    for (int y : a.members)
      out[static_cast<std::size_t>(g.mul(x, y))] += f[static_cast<std::size_t>(x)];
  }
  return out;
}

// A^{(k)} as exact counts: A^{(1)} = A, A^{(k)} = A^{(k-1)} * A.
inline std::vector<std::uint64_t> convolution_power_counts(const Subset& a,
                                                           int k) {
  if (k < 1) throw ValidationError("convolution_power_counts: k >= 1");
  std::vector<std::uint64_t> f(static_cast<std::size_t>(a.group->order()), 0);
  for (int x : a.members) f[static_cast<std::size_t>(x)] = 1;
  for (int i = 1; i < k; ++i) f = convolution_counts(f, a);
  return f;
}

struct DyadicLevel {
  double delta = 0.0;
  Subset level_set;
  Count energy_with_a;  // E(A, P)
  double score = 0.0;   // delta^2 * E(A, P)
};

// Picks the dyadic level P = {x : delta < f(x) <= 2 delta} maximizing
// delta^2 E(A, P); ties resolve to the smallest delta.
inline DyadicLevel dyadic_level_set(const std::vector<std::uint64_t>& f,
                                    const Subset& a) {
  const std::uint64_t mx = *std::max_element(f.begin(), f.end());
  if (mx == 0) throw ValidationError("dyadic_level_set: zero function");
  DyadicLevel best;
  bool have = false;
  for (double delta = 0.5; delta < static_cast<double>(mx); delta *= 2.0) {
    std::vector<int> members;
    for (std::size_t x = 0; x < f.size(); ++x)
      if (static_cast<double>(f[x]) > delta &&
          static_cast<double>(f[x]) <= 2.0 * delta)
        members.push_back(static_cast<int>(x));
    if (members.empty()) continue;
    Subset p(*a.group, std::move(members));
    Count e = energy(a, p);
    const double score = delta * delta * static_cast<double>(e);
    if (!have || score > best.score) {
      best = {delta, std::move(p), std::move(e), score};
      have = true;
    }
  }
  if (!have) throw ValidationError("dyadic_level_set: no nonempty level");
  return best;
}

// ---------------------------------------------------------------------------
// Exponent system for the energy/scalar-product chain.
//
// omega_j = 3 + 1/j; the weights x_j satisfy the downward recurrence
// x_{j-1} + 2 x_{j+1} = omega_j x_j (2 <= j <= k-2) with boundary
// x_{k-2} = omega_{k-1} x_{k-1}, normalized by x_{k-1} = 1.  Then with
// N = 4 x_1 - 2 x_2:
//   beta = x_{k-1} / N,  alpha_0 = 2 x_1 / N,  alpha_j = x_j / (j N),
// which satisfy the homogeneity identity 2 = alpha_0 + sum alpha_j 2^j +
// 2^k beta and the normalization 3 = 2 alpha_0 + 2 sum alpha_j (j+1) +
// (k+2) beta, with beta in [4^{-k}, 2^{-k+1}].

struct ExponentSolution {
  int k = 0;
  std::vector<Rational> alphas;  // alpha_0 .. alpha_{k-1}
  Rational beta;
  std::vector<Rational> xs;  // x_1 .. x_{k-1}

  Rational x(int j) const {  // 1-based, 0 outside range
    if (j < 1 || j > static_cast<int>(xs.size())) return Rational(0);
    return xs[static_cast<std::size_t>(j - 1)];
  }

  bool homogeneity_holds() const {
    Rational sum = alphas[0];
    Rational two_j(2);
    for (int j = 1; j < k; ++j) {
      sum += alphas[static_cast<std::size_t>(j)] * two_j;
      two_j *= 2;
    }
    sum += two_j * beta;  // two_j == 2^k here
    return sum == Rational(2);
  }

  bool energy_normalization_holds() const {
    Rational sum = Rational(2) * alphas[0];
    for (int j = 1; j < k; ++j)
      sum += Rational(2) * alphas[static_cast<std::size_t>(j)] * (j + 1);
    sum += Rational(k + 2) * beta;
    return sum == Rational(3);
  }

  bool recurrence_holds() const {
    for (int j = 2; j <= k - 2; ++j) {
      const Rational omega(3 * j + 1, j);
      if (x(j - 1) + Rational(2) * x(j + 1) != omega * x(j)) return false;
    }
    if (k >= 3) {
      const Rational omega(3 * (k - 1) + 1, k - 1);
      if (x(k - 2) != omega * x(k - 1)) return false;
    }
    return true;
  }

  bool positivity_holds() const {
    for (const auto& v : xs)
      if (v <= 0) return false;
    return true;
  }

  bool beta_in_range() const {
    Rational lo(1), hi(1);
    for (int i = 0; i < k; ++i) lo /= 4;
    for (int i = 0; i < k - 1; ++i) hi /= 2;
    return beta >= lo && beta <= hi;
  }
};

inline ExponentSolution gowers_exponents(int k) {
  if (k < 2) throw ValidationError("gowers_exponents: k >= 2");
  ExponentSolution sol;
  sol.k = k;
  sol.xs.assign(static_cast<std::size_t>(k - 1), Rational(0));
  auto set_x = [&](int j, const Rational& v) {
    sol.xs[static_cast<std::size_t>(j - 1)] = v;
  };
  set_x(k - 1, Rational(1));
  if (k >= 3) set_x(k - 2, Rational(3 * (k - 1) + 1, k - 1));
  for (int j = k - 2; j >= 2; --j) {
    const Rational omega(3 * j + 1, j);
    set_x(j - 1, omega * sol.x(j) - Rational(2) * sol.x(j + 1));
  }
  const Rational denom = Rational(4) * sol.x(1) - Rational(2) * sol.x(2);
  if (denom <= 0)
    throw ValidationError("gowers_exponents: degenerate weight chain");
  sol.beta = sol.x(k - 1) / denom;
  sol.alphas.assign(static_cast<std::size_t>(k), Rational(0));
  sol.alphas[0] = Rational(2) * sol.x(1) / denom;
  for (int j = 1; j < k; ++j)
    sol.alphas[static_cast<std::size_t>(j)] = sol.x(j) / (Rational(j) * denom);
  return sol;
}

}  // namespace fge
