#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fge/common.hpp"
#include "fge/energy.hpp"
#include "fge/groups.hpp"

// Polynomial zero sets inside an ambient group whose elements carry F_q
// coordinates: tuples for additive F_q^n, matrix entries (a,b,c,d) for the
// 2x2 matrix kinds.  Dimension is estimated from the point count (the
// heuristic |V| ~ q^d); degree is caller-supplied metadata echoed into
// reports, never computed symbolically.

namespace fge {

struct Monomial {
  std::vector<int> exps;  // one exponent per coordinate
  long long coeff = 0;
};

struct Polynomial {
  int n_vars = 0;
  int q = 0;
  std::vector<Monomial> terms;

  Polynomial() = default;
  Polynomial(int n_vars_, int q_, std::vector<Monomial> t)
      : n_vars(n_vars_), q(q_), terms(std::move(t)) {
    for (auto& m : terms) {
      if (static_cast<int>(m.exps.size()) != n_vars)
        throw ValidationError("polynomial: monomial arity mismatch");
      m.coeff %= q;
      if (m.coeff < 0) m.coeff += q;
    }
  }

  long long eval(const std::vector<int>& x) const {
    if (static_cast<int>(x.size()) != n_vars)
      throw ValidationError("polynomial: point arity mismatch");
    long long acc = 0;
    for (const auto& m : terms) {
      long long t = m.coeff;
      for (int i = 0; i < n_vars && t != 0; ++i)
        t = t * mod_pow(x[static_cast<std::size_t>(i)],
                        m.exps[static_cast<std::size_t>(i)], q) %
            q;
      acc = (acc + t) % q;
    }
    return acc;
  }
};

struct Variety {
  GroupPtr ambient;
  std::vector<Polynomial> polys;
  std::optional<int> meta_dim;
  std::optional<int> meta_deg;
  Subset points;

  int q() const { return ambient->coordinate_char(); }
};

inline Subset variety_points(const FiniteGroup& g,
                             const std::vector<Polynomial>& polys) {
  const int q = g.coordinate_char();
  if (q == 0)
    throw ValidationError(
        "variety: ambient group has no F_q coordinate system");
  for (const auto& p : polys)
    if (p.n_vars != g.width() || p.q != q)
      throw ValidationError("variety: polynomial arity/characteristic mismatch");
  std::vector<int> members;
  for (int i = 0; i < g.order(); ++i) {
    const auto& c = g.coordinates(i);
    bool on = true;
    for (const auto& p : polys)
      if (p.eval(c) != 0) {
        on = false;
        break;
      }
    if (on) members.push_back(i);
  }
  return Subset(g, std::move(members));
}

inline Variety make_variety(GroupPtr ambient, std::vector<Polynomial> polys,
                            std::optional<int> meta_dim = std::nullopt,
                            std::optional<int> meta_deg = std::nullopt) {
  Variety v;
  v.ambient = std::move(ambient);
  v.points = variety_points(*v.ambient, polys);
  v.polys = std::move(polys);
  v.meta_dim = meta_dim;
  v.meta_deg = meta_deg;
  return v;
}

// Spot-check that the cached point set matches polynomial membership:
// full re-evaluation up to order 10^4, a seeded sample of >= 10^3 above.
inline bool verify_variety_points(const Variety& v, Rng& rng) {
  const FiniteGroup& g = *v.ambient;
  auto satisfied = [&](int i) {
    for (const auto& p : v.polys)
      if (p.eval(g.coordinates(i)) != 0) return false;
    return true;
  };
  if (g.order() <= 10000) {
    for (int i = 0; i < g.order(); ++i)
      if (satisfied(i) != v.points.contains(i)) return false;
    return true;
  }
  std::uniform_int_distribution<int> pick(0, g.order() - 1);
  for (int t = 0; t < 1000; ++t) {
    const int i = pick(rng);
    if (satisfied(i) != v.points.contains(i)) return false;
  }
  return true;
}

struct DimensionEstimate {
  int d_hat = 0;
  double ratio = 0.0;  // |V| / q^{d_hat}
};

// Rounds log_q |V| to the nearest integer; refuses when the count is too
// far from any power of q to be read as a dimension.
inline DimensionEstimate estimate_dimension(const Variety& v) {
  const int count = v.points.size();
  if (count == 0)
    throw ValidationError("estimate_dimension: empty variety has no dimension");
  const double q = static_cast<double>(v.q());
  const int d_hat =
      static_cast<int>(std::lround(std::log(static_cast<double>(count)) / std::log(q)));
  const double ratio = static_cast<double>(count) / std::pow(q, d_hat);
  if (std::fabs(ratio - 1.0) > 0.5)
    throw ValidationError(
        "estimate_dimension: point count is not close to a power of q (ratio " +
        std::to_string(ratio) + ")");
  return {d_hat, ratio};
}

// Stab(W) = {g : gW = W}; always a subgroup.
inline Subset stabilizer(const Subset& w) {
  if (w.empty()) throw ValidationError("stabilizer: empty set");
  const FiniteGroup& g = *w.group;
  const auto m = w.mask();
  std::vector<int> out;
  for (int cand = 0; cand < g.order(); ++cand) {
    bool stab = true;
    for (int x : w.members)
      if (!m[static_cast<std::size_t>(g.mul(cand, x))]) {
        stab = false;
        break;
      }
    if (stab) out.push_back(cand);
  }
  Subset s(g, std::move(out));
  // |gW| = |W|, so gW subset of W already forces equality; closure is a
  // structural consequence worth asserting cheaply.
  if (!is_subgroup(s))
    throw ValidationError("stabilizer: result is not a subgroup");
  return s;
}

struct TParameterResult {
  long long t_value = 1;
  int witness_shift = 0;
  std::vector<int> witness_subgroup;  // generators
  int gen_bound_used = 0;
};

// t(W): the largest |H| over subgroups H (from the gen_bound-limited
// enumeration) and shifts x with xH inside W.  The trivial subgroup makes
// t >= 1 for nonempty W.
inline TParameterResult max_coset_subgroup(const Subset& w, int gen_bound,
                                           const std::vector<Subgroup>* pre_enumerated = nullptr) {
  if (w.empty()) throw ValidationError("max_coset_subgroup: empty set");
  const FiniteGroup& g = *w.group;
  std::vector<Subgroup> local;
  if (pre_enumerated == nullptr) {
    local = enumerate_subgroups(g, gen_bound);
    pre_enumerated = &local;
  }
  const auto wm = w.mask();
  TParameterResult best;
  best.gen_bound_used = gen_bound;
  best.t_value = 0;
  for (const auto& h : *pre_enumerated) {
    if (h.set.size() <= best.t_value) continue;
    if (h.set.size() > w.size()) continue;
    // x must itself lie in W because identity is in H.
    for (int x : w.members) {
      bool inside = true;
      for (int hh : h.set.members)
        if (!wm[static_cast<std::size_t>(g.mul(x, hh))]) {
          inside = false;
          break;
        }
      if (inside) {
        best.t_value = h.set.size();
        best.witness_shift = x;
        best.witness_subgroup = h.gens;
        break;
      }
    }
  }
  if (best.t_value == 0)
    throw ValidationError("max_coset_subgroup: trivial subgroup missing");
  return best;
}

// Histogram of |V cap gV| over g in G, value -> multiplicity.  The total
// sum over g equals |V|^2.
inline std::map<std::uint64_t, std::uint64_t> shift_intersection_profile(
    const Subset& v) {
  const FiniteGroup& g = *v.group;
  const auto r = r_counts(v, v, PairMode::MulInv);  // |V cap gV| = r_{VV^{-1}}(g)
  std::map<std::uint64_t, std::uint64_t> hist;
  unsigned __int128 total = 0;
  for (std::uint64_t val : r) {
    ++hist[val];
    total += val;
  }
  const unsigned __int128 want =
      static_cast<unsigned __int128>(v.size()) * static_cast<unsigned __int128>(v.size());
  if (total != want)
    throw ValidationError("shift profile: mass does not sum to |V|^2");
  return hist;
}

inline Count profile_moment(const std::map<std::uint64_t, std::uint64_t>& hist,
                            int k) {
  Count acc = 0;
  for (const auto& [value, mult] : hist) {
    if (value == 0) continue;
    Count term = Count(value);
    for (int i = 1; i < k; ++i) term *= Count(value);
    acc += term * mult;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// JSON wire format:
//   {"ambient": <group spec>, "polys": [[[e1,..,en], coeff], ...],
//    "meta_dim": d?, "meta_deg": D?}

inline std::vector<Polynomial> parse_polys(const nlohmann::json& arr, int n_vars,
                                           int q) {
  if (!arr.is_array()) throw ValidationError("variety: \"polys\" must be an array");
  std::vector<Polynomial> ps;
  for (const auto& pj : arr) {
    std::vector<Monomial> terms;
    if (!pj.is_array()) throw ValidationError("variety: polynomial must be an array");
    for (const auto& tj : pj) {
      if (!tj.is_array() || tj.size() != 2)
        throw ValidationError("variety: term must be [[exps], coeff]");
      Monomial m;
      m.exps = tj.at(0).get<std::vector<int>>();
      m.coeff = tj.at(1).get<long long>();
      terms.push_back(std::move(m));
    }
    ps.emplace_back(n_vars, q, std::move(terms));
  }
  return ps;
}

inline Variety parse_variety(const nlohmann::json& j, BuildOptions opt = {}) {
  if (!j.is_object() || !j.contains("ambient") || !j.contains("polys"))
    throw ValidationError("variety: expected {\"ambient\",\"polys\"}");
  GroupSpec spec = GroupSpec::parse(j.at("ambient"));
  GroupPtr g = build_group(spec, opt);
  const int q = g->coordinate_char();
  if (q == 0)
    throw ValidationError("variety: ambient group has no F_q coordinates");
  auto polys = parse_polys(j.at("polys"), g->width(), q);
  std::optional<int> md, mD;
  if (j.contains("meta_dim")) md = j.at("meta_dim").get<int>();
  if (j.contains("meta_deg")) mD = j.at("meta_deg").get<int>();
  return make_variety(std::move(g), std::move(polys), md, mD);
}

inline nlohmann::ordered_json points_to_json(const Subset& s) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int x : s.members) arr.push_back(x);
  return arr;
}

// Convenience builders used across suites and tests.

// {(x, x^2, ..) : x in F_p} cut out by y - x^2 in F_p^2.
inline Variety parabola_variety(int p, BuildOptions opt = {}) {
  GroupPtr g = build_group(GroupSpec::additive(p, 2), opt);
  Polynomial poly(2, p, {Monomial{{0, 1}, 1}, Monomial{{2, 0}, p - 1}});
  return make_variety(std::move(g), {poly}, 1, 2);
}

// The coordinate line x = 0 in F_p^2.
inline Variety line_variety(int p, BuildOptions opt = {}) {
  GroupPtr g = build_group(GroupSpec::additive(p, 2), opt);
  Polynomial poly(2, p, {Monomial{{1, 0}, 1}});
  return make_variety(std::move(g), {poly}, 1, 1);
}

// Union of the line x = 0 and the parabola y = x^2: zero set of
// x * (y - x^2).
inline Variety line_union_parabola_variety(int p, BuildOptions opt = {}) {
  GroupPtr g = build_group(GroupSpec::additive(p, 2), opt);
  Polynomial poly(2, p, {Monomial{{1, 1}, 1}, Monomial{{3, 0}, p - 1}});
  return make_variety(std::move(g), {poly}, 1, 3);
}

// Elements of SL2(p) with the given trace, as a variety over the matrix
// coordinates (det - 1 is implied by the ambient group).
inline Variety sl2_trace_variety(int p, int trace, BuildOptions opt = {}) {
  GroupPtr g = build_group(GroupSpec::sl2(p), opt);
  Polynomial poly(4, p,
                  {Monomial{{1, 0, 0, 0}, 1}, Monomial{{0, 0, 0, 1}, 1},
                   Monomial{{0, 0, 0, 0}, -trace}});
  return make_variety(std::move(g), {poly}, std::nullopt, std::nullopt);
}

}  // namespace fge
