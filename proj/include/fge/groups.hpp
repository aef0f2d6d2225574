#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "fge/common.hpp"

// Finite groups with exact element arithmetic.
//
// Every supported group kind carries a canonical coordinate tuple per
// element (residue, vector over F_p, (rotation, flip) pair, permutation
// image sequence, matrix entries).  Elements are enumerated in
// lexicographic coordinate order, so indices, labels and all downstream
// output are deterministic across runs.  Multiplication is a dense table
// for small orders and coordinate arithmetic plus a hash lookup above the
// table cap.

namespace fge {

enum class GroupKind {
  Cyclic,
  Additive,
  Dihedral,
  Symmetric,
  SL2,
  GL2,
  Borel2,
  Heisenberg,
  Product,
};

struct GroupSpec {
  GroupKind kind = GroupKind::Cyclic;
  int n = 0;  // cyclic / dihedral / symmetric parameter
  int p = 0;  // field characteristic for matrix and additive kinds
  int m = 1;  // coordinate count for additive F_p^m
  std::vector<GroupSpec> factors;

  static GroupSpec cyclic(int n) { return {GroupKind::Cyclic, n, 0, 1, {}}; }
  static GroupSpec additive(int p, int m) {
    return {GroupKind::Additive, 0, p, m, {}};
  }
  static GroupSpec dihedral(int n) { return {GroupKind::Dihedral, n, 0, 1, {}}; }
  static GroupSpec symmetric(int n) {
    return {GroupKind::Symmetric, n, 0, 1, {}};
  }
  static GroupSpec sl2(int p) { return {GroupKind::SL2, 0, p, 1, {}}; }
  static GroupSpec gl2(int p) { return {GroupKind::GL2, 0, p, 1, {}}; }
  static GroupSpec borel2(int p) { return {GroupKind::Borel2, 0, p, 1, {}}; }
  static GroupSpec heisenberg(int p) {
    return {GroupKind::Heisenberg, 0, p, 1, {}};
  }
  static GroupSpec product(std::vector<GroupSpec> fs) {
    GroupSpec s;
    s.kind = GroupKind::Product;
    s.factors = std::move(fs);
    return s;
  }

  void validate() const {
    switch (kind) {
      case GroupKind::Cyclic:
        if (n < 1) throw ValidationError("cyclic: n must be >= 1");
        break;
      case GroupKind::Dihedral:
        if (n < 1) throw ValidationError("dihedral: n must be >= 1");
        break;
      case GroupKind::Symmetric:
        if (n < 1 || n > 10)
          throw ValidationError("symmetric: n must be in [1,10]");
        break;
      case GroupKind::Additive:
        if (!is_prime(p)) throw ValidationError("additive: p must be prime");
        if (m < 1 || m > 16)
          throw ValidationError("additive: m must be in [1,16]");
        break;
      case GroupKind::SL2:
      case GroupKind::GL2:
      case GroupKind::Borel2:
      case GroupKind::Heisenberg:
        if (!is_prime(p)) throw ValidationError("matrix kind: p must be prime");
        break;
      case GroupKind::Product:
        if (factors.empty())
          throw ValidationError("product: needs at least one factor");
        for (const auto& f : factors) f.validate();
        break;
    }
  }

  long long order() const {
    validate();
    switch (kind) {
      case GroupKind::Cyclic:
        return n;
      case GroupKind::Additive: {
        long long o = 1;
        for (int i = 0; i < m; ++i) {
          o *= p;
          if (o > (1LL << 40)) throw ValidationError("additive: order overflow");
        }
        return o;
      }
      case GroupKind::Dihedral:
        return 2LL * n;
      case GroupKind::Symmetric: {
        long long o = 1;
        for (int i = 2; i <= n; ++i) o *= i;
        return o;
      }
      case GroupKind::SL2:
        return static_cast<long long>(p) * ((long long)p * p - 1);
      case GroupKind::GL2:
        return ((long long)p * p - 1) * ((long long)p * p - p);
      case GroupKind::Borel2:
        return static_cast<long long>(p) * (p - 1);
      case GroupKind::Heisenberg:
        return static_cast<long long>(p) * p * p;
      case GroupKind::Product: {
        long long o = 1;
        for (const auto& f : factors) {
          o *= f.order();
          if (o > (1LL << 40)) throw ValidationError("product: order overflow");
        }
        return o;
      }
    }
    throw ValidationError("unknown group kind");
  }

  bool abelian() const {
    switch (kind) {
      case GroupKind::Cyclic:
      case GroupKind::Additive:
        return true;
      case GroupKind::Dihedral:
        return n <= 2;
      case GroupKind::Symmetric:
        return n <= 2;
      case GroupKind::SL2:
      case GroupKind::GL2:
        return false;  // SL2(2) ~ GL2(2) ~ S3
      case GroupKind::Borel2:
        return p <= 3;  // diagonal action a^2 is trivial only mod 2, 3
      case GroupKind::Heisenberg:
        return false;
      case GroupKind::Product:
        return std::all_of(factors.begin(), factors.end(),
                           [](const GroupSpec& f) { return f.abelian(); });
    }
    return false;
  }

  // Structural coordinate width (always defined).
  int width() const {
    switch (kind) {
      case GroupKind::Cyclic:
        return 1;
      case GroupKind::Additive:
        return m;
      case GroupKind::Dihedral:
        return 2;
      case GroupKind::Symmetric:
        return n;
      case GroupKind::SL2:
      case GroupKind::GL2:
      case GroupKind::Borel2:
        return 4;
      case GroupKind::Heisenberg:
        return 3;
      case GroupKind::Product: {
        int w = 0;
        for (const auto& f : factors) w += f.width();
        return w;
      }
    }
    return 0;
  }

  // Characteristic of the coordinate field when elements carry F_q
  // coordinates usable for polynomial evaluation; 0 otherwise.
  int coordinate_char() const {
    switch (kind) {
      case GroupKind::Cyclic:
        return is_prime(n) ? n : 0;
      case GroupKind::Additive:
      case GroupKind::SL2:
      case GroupKind::GL2:
      case GroupKind::Borel2:
      case GroupKind::Heisenberg:
        return p;
      case GroupKind::Product: {
        int q = factors.front().coordinate_char();
        if (q == 0) return 0;
        for (const auto& f : factors)
          if (f.coordinate_char() != q) return 0;
        return q;
      }
      default:
        return 0;
    }
  }

  // Cyclic moduli when the group is a direct product of cyclic groups in
  // coordinate form; empty for kinds without that structure.  Abelian
  // character theory uses this as its closed-form basis.
  std::vector<int> cyclic_moduli() const {
    std::vector<int> mods;
    switch (kind) {
      case GroupKind::Cyclic:
        mods.push_back(n);
        return mods;
      case GroupKind::Additive:
        mods.assign(static_cast<std::size_t>(m), p);
        return mods;
      case GroupKind::Product: {
        for (const auto& f : factors) {
          auto sub = f.cyclic_moduli();
          if (sub.empty()) return {};
          mods.insert(mods.end(), sub.begin(), sub.end());
        }
        return mods;
      }
      default:
        return {};
    }
  }

  std::string key() const {
    std::ostringstream os;
    switch (kind) {
      case GroupKind::Cyclic:
        os << "cyclic(" << n << ")";
        break;
      case GroupKind::Additive:
        os << "additive(" << p << "^" << m << ")";
        break;
      case GroupKind::Dihedral:
        os << "dihedral(" << n << ")";
        break;
      case GroupKind::Symmetric:
        os << "symmetric(" << n << ")";
        break;
      case GroupKind::SL2:
        os << "SL2(" << p << ")";
        break;
      case GroupKind::GL2:
        os << "GL2(" << p << ")";
        break;
      case GroupKind::Borel2:
        os << "borel2(" << p << ")";
        break;
      case GroupKind::Heisenberg:
        os << "heisenberg(" << p << ")";
        break;
      case GroupKind::Product: {
        os << "product(";
        for (std::size_t i = 0; i < factors.size(); ++i) {
          if (i) os << ",";
          os << factors[i].key();
        }
        os << ")";
        break;
      }
    }
    return os.str();
  }

  static GroupSpec parse(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
      throw ValidationError("group spec: expected object with \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    auto geti = [&](const char* key) {
      if (!j.contains(key))
        throw ValidationError(std::string("group spec: missing \"") + key +
                              "\" for kind " + kind);
      return j.at(key).get<int>();
    };
    GroupSpec s;
    if (kind == "cyclic") {
      s = cyclic(geti("n"));
    } else if (kind == "additive") {
      s = additive(geti("p"), j.value("m", 1));
    } else if (kind == "dihedral") {
      s = dihedral(geti("n"));
    } else if (kind == "symmetric") {
      s = symmetric(geti("n"));
    } else if (kind == "SL2") {
      s = sl2(geti("p"));
    } else if (kind == "GL2") {
      s = gl2(geti("p"));
    } else if (kind == "borel2") {
      s = borel2(geti("p"));
    } else if (kind == "heisenberg") {
      s = heisenberg(geti("p"));
    } else if (kind == "product") {
      if (!j.contains("factors") || !j.at("factors").is_array())
        throw ValidationError("group spec: product needs \"factors\" array");
      std::vector<GroupSpec> fs;
      for (const auto& f : j.at("factors")) fs.push_back(parse(f));
      s = product(std::move(fs));
    } else {
      throw ValidationError("group spec: unknown kind \"" + kind + "\"");
    }
    s.validate();
    return s;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    switch (kind) {
      case GroupKind::Cyclic:
        j["kind"] = "cyclic";
        j["n"] = n;
        break;
      case GroupKind::Additive:
        j["kind"] = "additive";
        j["p"] = p;
        j["m"] = m;
        break;
      case GroupKind::Dihedral:
        j["kind"] = "dihedral";
        j["n"] = n;
        break;
      case GroupKind::Symmetric:
        j["kind"] = "symmetric";
        j["n"] = n;
        break;
      case GroupKind::SL2:
        j["kind"] = "SL2";
        j["p"] = p;
        break;
      case GroupKind::GL2:
        j["kind"] = "GL2";
        j["p"] = p;
        break;
      case GroupKind::Borel2:
        j["kind"] = "borel2";
        j["p"] = p;
        break;
      case GroupKind::Heisenberg:
        j["kind"] = "heisenberg";
        j["p"] = p;
        break;
      case GroupKind::Product: {
        j["kind"] = "product";
        auto arr = nlohmann::ordered_json::array();
        for (const auto& f : factors) arr.push_back(f.to_json());
        j["factors"] = arr;
        break;
      }
    }
    return j;
  }
};

namespace detail {

using Coords = std::vector<int>;

inline void mul_coords(const GroupSpec& s, const int* a, const int* b,
                       int* out) {
  switch (s.kind) {
    case GroupKind::Cyclic:
      out[0] = (a[0] + b[0]) % s.n;
      return;
    case GroupKind::Additive:
      for (int i = 0; i < s.m; ++i) out[i] = (a[i] + b[i]) % s.p;
      return;
    case GroupKind::Dihedral: {
      // a = r^i s^j; s r s^{-1} = r^{-1}
      const int i = a[0], j = a[1], i2 = b[0], j2 = b[1];
      out[0] = (j ? (i - i2 % s.n + s.n) : (i + i2)) % s.n;
      out[1] = j ^ j2;
      return;
    }
    case GroupKind::Symmetric:
      // (a b)(x) = a(b(x))
      for (int x = 0; x < s.n; ++x) out[x] = a[b[x]];
      return;
    case GroupKind::SL2:
    case GroupKind::GL2:
    case GroupKind::Borel2: {
      const long long p = s.p;
      out[0] = static_cast<int>((1LL * a[0] * b[0] + 1LL * a[1] * b[2]) % p);
      out[1] = static_cast<int>((1LL * a[0] * b[1] + 1LL * a[1] * b[3]) % p);
      out[2] = static_cast<int>((1LL * a[2] * b[0] + 1LL * a[3] * b[2]) % p);
      out[3] = static_cast<int>((1LL * a[2] * b[1] + 1LL * a[3] * b[3]) % p);
      return;
    }
    case GroupKind::Heisenberg: {
      const long long p = s.p;
      out[0] = static_cast<int>((a[0] + b[0]) % p);
      out[1] = static_cast<int>((a[1] + b[1]) % p);
      out[2] = static_cast<int>((a[2] + b[2] + 1LL * a[0] * b[1]) % p);
      return;
    }
    case GroupKind::Product: {
      int off = 0;
      for (const auto& f : s.factors) {
        mul_coords(f, a + off, b + off, out + off);
        off += f.width();
      }
      return;
    }
  }
}

inline void inv_coords(const GroupSpec& s, const int* a, int* out) {
  switch (s.kind) {
    case GroupKind::Cyclic:
      out[0] = (s.n - a[0]) % s.n;
      return;
    case GroupKind::Additive:
      for (int i = 0; i < s.m; ++i) out[i] = (s.p - a[i]) % s.p;
      return;
    case GroupKind::Dihedral:
      out[0] = a[1] ? a[0] : (s.n - a[0]) % s.n;
      out[1] = a[1];
      return;
    case GroupKind::Symmetric:
      for (int x = 0; x < s.n; ++x) out[a[x]] = x;
      return;
    case GroupKind::SL2:
    case GroupKind::Borel2: {
      const int p = s.p;
      out[0] = a[3];
      out[1] = (p - a[1]) % p;
      out[2] = (p - a[2]) % p;
      out[3] = a[0];
      return;
    }
    case GroupKind::GL2: {
      const long long p = s.p;
      long long det =
          ((1LL * a[0] * a[3] - 1LL * a[1] * a[2]) % p + p) % p;
      long long di = mod_pow(det, p - 2, p);
      out[0] = static_cast<int>(a[3] * di % p);
      out[1] = static_cast<int>((p - a[1]) * di % p);
      out[2] = static_cast<int>((p - a[2]) * di % p);
      out[3] = static_cast<int>(a[0] * di % p);
      return;
    }
    case GroupKind::Heisenberg: {
      const int p = s.p;
      out[0] = (p - a[0]) % p;
      out[1] = (p - a[1]) % p;
      out[2] = static_cast<int>(((1LL * a[0] * a[1] - a[2]) % p + p) % p);
      return;
    }
    case GroupKind::Product: {
      int off = 0;
      for (const auto& f : s.factors) {
        inv_coords(f, a + off, out + off);
        off += f.width();
      }
      return;
    }
  }
}

inline void identity_coords(const GroupSpec& s, int* out) {
  switch (s.kind) {
    case GroupKind::Symmetric:
      for (int x = 0; x < s.n; ++x) out[x] = x;
      return;
    case GroupKind::SL2:
    case GroupKind::GL2:
    case GroupKind::Borel2:
      out[0] = 1;
      out[1] = 0;
      out[2] = 0;
      out[3] = 1;
      return;
    case GroupKind::Product: {
      int off = 0;
      for (const auto& f : s.factors) {
        identity_coords(f, out + off);
        off += f.width();
      }
      return;
    }
    default:
      std::fill(out, out + s.width(), 0);
      return;
  }
}

// Enumerates element coordinate tuples in lexicographic order.
inline void enumerate_coords(const GroupSpec& s,
                             std::vector<Coords>& out) {
  switch (s.kind) {
    case GroupKind::Cyclic:
      for (int v = 0; v < s.n; ++v) out.push_back({v});
      return;
    case GroupKind::Additive: {
      Coords c(static_cast<std::size_t>(s.m), 0);
      while (true) {
        out.push_back(c);
        int i = s.m - 1;
        while (i >= 0 && ++c[static_cast<std::size_t>(i)] == s.p)
          c[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
      }
      return;
    }
    case GroupKind::Dihedral:
      for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < 2; ++j) out.push_back({i, j});
      return;
    case GroupKind::Symmetric: {
      Coords c(static_cast<std::size_t>(s.n));
      std::iota(c.begin(), c.end(), 0);
      do {
        out.push_back(c);
      } while (std::next_permutation(c.begin(), c.end()));
      return;
    }
    case GroupKind::SL2:
    case GroupKind::GL2:
      for (int a = 0; a < s.p; ++a)
        for (int b = 0; b < s.p; ++b)
          for (int c = 0; c < s.p; ++c)
            for (int d = 0; d < s.p; ++d) {
              const int det =
                  static_cast<int>(((1LL * a * d - 1LL * b * c) % s.p + s.p) %
                                   s.p);
              if (s.kind == GroupKind::SL2 ? det == 1 : det != 0)
                out.push_back({a, b, c, d});
            }
      return;
    case GroupKind::Borel2:
      for (int a = 1; a < s.p; ++a)
        for (int b = 0; b < s.p; ++b) {
          const int d = static_cast<int>(mod_pow(a, s.p - 2, s.p));
          out.push_back({a, b, 0, d});
        }
      std::sort(out.begin(), out.end());
      return;
    case GroupKind::Heisenberg:
      for (int a = 0; a < s.p; ++a)
        for (int b = 0; b < s.p; ++b)
          for (int c = 0; c < s.p; ++c) out.push_back({a, b, c});
      return;
    case GroupKind::Product: {
      std::vector<std::vector<Coords>> parts(s.factors.size());
      for (std::size_t i = 0; i < s.factors.size(); ++i)
        enumerate_coords(s.factors[i], parts[i]);
      Coords cur;
      std::vector<std::size_t> idx(s.factors.size(), 0);
      while (true) {
        cur.clear();
        for (std::size_t i = 0; i < parts.size(); ++i) {
          const auto& c = parts[i][idx[i]];
          cur.insert(cur.end(), c.begin(), c.end());
        }
        out.push_back(cur);
        std::size_t i = parts.size();
        while (i-- > 0) {
          if (++idx[i] < parts[i].size()) break;
          idx[i] = 0;
          if (i == 0) return;
        }
      }
    }
  }
}

inline std::string label_of(const GroupSpec& s, const int* c) {
  std::ostringstream os;
  switch (s.kind) {
    case GroupKind::Cyclic:
      os << c[0];
      break;
    case GroupKind::Additive: {
      os << "(";
      for (int i = 0; i < s.m; ++i) os << (i ? "," : "") << c[i];
      os << ")";
      break;
    }
    case GroupKind::Dihedral:
      os << "r" << c[0] << (c[1] ? "s" : "");
      break;
    case GroupKind::Symmetric: {
      os << "[";
      for (int i = 0; i < s.n; ++i) os << (i ? "," : "") << c[i];
      os << "]";
      break;
    }
    case GroupKind::SL2:
    case GroupKind::GL2:
    case GroupKind::Borel2:
      os << "[[" << c[0] << "," << c[1] << "],[" << c[2] << "," << c[3]
         << "]]";
      break;
    case GroupKind::Heisenberg:
      os << "(" << c[0] << "," << c[1] << "," << c[2] << ")";
      break;
    case GroupKind::Product: {
      os << "(";
      int off = 0;
      for (std::size_t i = 0; i < s.factors.size(); ++i) {
        if (i) os << "|";
        os << label_of(s.factors[i], c + off);
        off += s.factors[i].width();
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

struct CoordsHash {
  std::size_t operator()(const Coords& c) const {
    return static_cast<std::size_t>(
        fnv1a(c.data(), c.size() * sizeof(int)));
  }
};

}  // namespace detail

struct BuildOptions {
  // Orders above dense_cap use coordinate arithmetic with a hash lookup
  // per product instead of an order^2 table.
  int dense_cap = 2500;
  long long order_cap = 5040;
};

class FiniteGroup {
 public:
  FiniteGroup(GroupSpec spec, BuildOptions opt) : spec_(std::move(spec)) {
    spec_.validate();
    const long long ord = spec_.order();
    if (ord > opt.order_cap)
      throw CapacityError("group order " + std::to_string(ord) +
                          " exceeds cap " + std::to_string(opt.order_cap));
    detail::enumerate_coords(spec_, coords_);
    n_ = static_cast<int>(coords_.size());
    if (n_ != ord)
      throw ValidationError("element enumeration does not match group order");
    width_ = spec_.width();
    index_.reserve(static_cast<std::size_t>(n_) * 2);
    for (int i = 0; i < n_; ++i) index_.emplace(coords_[static_cast<std::size_t>(i)], i);

    detail::Coords idc(static_cast<std::size_t>(width_));
    detail::identity_coords(spec_, idc.data());
    identity_ = index_.at(idc);

    inv_.resize(static_cast<std::size_t>(n_));
    detail::Coords tmp(static_cast<std::size_t>(width_));
    for (int i = 0; i < n_; ++i) {
      detail::inv_coords(spec_, coords_[static_cast<std::size_t>(i)].data(), tmp.data());
      inv_[static_cast<std::size_t>(i)] = index_.at(tmp);
    }

    if (n_ <= opt.dense_cap) {
      table_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
      for (int a = 0; a < n_; ++a) {
        const int* ca = coords_[static_cast<std::size_t>(a)].data();
        for (int b = 0; b < n_; ++b) {
          detail::mul_coords(spec_, ca, coords_[static_cast<std::size_t>(b)].data(), tmp.data());
          table_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) +
                 static_cast<std::size_t>(b)] = index_.at(tmp);
        }
      }
    }

    labels_.reserve(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
      labels_.push_back(detail::label_of(spec_, coords_[static_cast<std::size_t>(i)].data()));
    abelian_ = spec_.abelian();
  }

  const GroupSpec& spec() const { return spec_; }
  int order() const { return n_; }
  int identity() const { return identity_; }
  bool abelian() const { return abelian_; }
  bool has_dense_table() const { return !table_.empty(); }

  int mul(int a, int b) const {
    if (!table_.empty())
      return table_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) +
                    static_cast<std::size_t>(b)];
    thread_local detail::Coords tmp;
    tmp.resize(static_cast<std::size_t>(width_));
    detail::mul_coords(spec_, coords_[static_cast<std::size_t>(a)].data(),
                       coords_[static_cast<std::size_t>(b)].data(), tmp.data());
    return index_.at(tmp);
  }

  int inverse(int a) const { return inv_[static_cast<std::size_t>(a)]; }

  int conj(int g, int x) const { return mul(mul(g, x), inverse(g)); }

  const std::string& label(int i) const {
    return labels_[static_cast<std::size_t>(i)];
  }
  const std::vector<int>& coordinates(int i) const {
    return coords_[static_cast<std::size_t>(i)];
  }

  // Index lookup by coordinates; -1 if absent (e.g. non-invertible matrix).
  int index_of(const std::vector<int>& c) const {
    auto it = index_.find(c);
    return it == index_.end() ? -1 : it->second;
  }

  int coordinate_char() const { return spec_.coordinate_char(); }
  int width() const { return width_; }
  std::vector<int> cyclic_moduli() const { return spec_.cyclic_moduli(); }

 private:
  GroupSpec spec_;
  int n_ = 0;
  int width_ = 0;
  int identity_ = 0;
  bool abelian_ = false;
  std::vector<detail::Coords> coords_;
  std::unordered_map<detail::Coords, int, detail::CoordsHash> index_;
  std::vector<int> inv_;
  std::vector<int> table_;
  std::vector<std::string> labels_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline GroupPtr build_group(const GroupSpec& spec, BuildOptions opt = {}) {
  return std::make_shared<FiniteGroup>(spec, opt);
}

// ---------------------------------------------------------------------------
// Subsets

struct Subset {
  const FiniteGroup* group = nullptr;
  std::vector<int> members;  // sorted, duplicate-free

  Subset() = default;
  Subset(const FiniteGroup& g, std::vector<int> m) : group(&g), members(std::move(m)) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (!members.empty() &&
        (members.front() < 0 || members.back() >= g.order()))
      throw ValidationError("subset: element index out of range");
  }

  int size() const { return static_cast<int>(members.size()); }
  bool empty() const { return members.empty(); }
  bool contains(int x) const {
    return std::binary_search(members.begin(), members.end(), x);
  }
  std::vector<std::uint8_t> mask() const {
    std::vector<std::uint8_t> m(static_cast<std::size_t>(group->order()), 0);
    for (int x : members) m[static_cast<std::size_t>(x)] = 1;
    return m;
  }
  bool operator==(const Subset& o) const {
    return group == o.group && members == o.members;
  }
};

inline Subset full_set(const FiniteGroup& g) {
  std::vector<int> all(static_cast<std::size_t>(g.order()));
  std::iota(all.begin(), all.end(), 0);
  return Subset(g, std::move(all));
}

inline void require_same_group(const Subset& a, const Subset& b) {
  if (a.group == nullptr || a.group != b.group)
    throw ValidationError("subsets must live in the same group");
}

inline Subset product_set(const Subset& a, const Subset& b) {
  require_same_group(a, b);
  const FiniteGroup& g = *a.group;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.order()), 0);
  for (int x : a.members)
    for (int y : b.members) seen[static_cast<std::size_t>(g.mul(x, y))] = 1;
  std::vector<int> out;
  for (int i = 0; i < g.order(); ++i)
    if (seen[static_cast<std::size_t>(i)]) out.push_back(i);
  return Subset(g, std::move(out));
}

inline Subset inverse_set(const Subset& a) {
  const FiniteGroup& g = *a.group;
  std::vector<int> out;
  out.reserve(a.members.size());
  for (int x : a.members) out.push_back(g.inverse(x));
  return Subset(g, std::move(out));
}

inline Subset translate_left(int g0, const Subset& a) {
  const FiniteGroup& g = *a.group;
  std::vector<int> out;
  out.reserve(a.members.size());
  for (int x : a.members) out.push_back(g.mul(g0, x));
  return Subset(g, std::move(out));
}

inline Subset translate_right(const Subset& a, int g0) {
  const FiniteGroup& g = *a.group;
  std::vector<int> out;
  out.reserve(a.members.size());
  for (int x : a.members) out.push_back(g.mul(x, g0));
  return Subset(g, std::move(out));
}

inline Subset intersect(const Subset& a, const Subset& b) {
  require_same_group(a, b);
  std::vector<int> out;
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(),
                        b.members.end(), std::back_inserter(out));
  return Subset(*a.group, std::move(out));
}

inline Subset unite(const Subset& a, const Subset& b) {
  require_same_group(a, b);
  std::vector<int> out;
  std::set_union(a.members.begin(), a.members.end(), b.members.begin(),
                 b.members.end(), std::back_inserter(out));
  return Subset(*a.group, std::move(out));
}

// Seeded Bernoulli sample; deterministic for a fixed seed.
inline Subset random_subset(const FiniteGroup& g, double density, Rng& rng) {
  std::bernoulli_distribution coin(density);
  std::vector<int> out;
  for (int i = 0; i < g.order(); ++i)
    if (coin(rng)) out.push_back(i);
  return Subset(g, std::move(out));
}

// Uniform sample of exactly k elements from the given pool.
inline Subset random_subset_of(const FiniteGroup& g, const std::vector<int>& pool,
                               int k, Rng& rng) {
  std::vector<int> shuffled = pool;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  shuffled.resize(static_cast<std::size_t>(std::min<int>(k, static_cast<int>(pool.size()))));
  return Subset(g, std::move(shuffled));
}

// ---------------------------------------------------------------------------
// Subgroup machinery

// Smallest subgroup containing gens: breadth-first closure under right
// multiplication by the generators.  In a finite group the set of finite
// generator words is already closed under inverses.
inline Subset subgroup_closure(const FiniteGroup& g, const std::vector<int>& gens) {
  std::vector<std::uint8_t> in(static_cast<std::size_t>(g.order()), 0);
  std::vector<int> queue;
  auto push = [&](int x) {
    if (!in[static_cast<std::size_t>(x)]) {
      in[static_cast<std::size_t>(x)] = 1;
      queue.push_back(x);
    }
  };
  push(g.identity());
  for (int x : gens) push(x);
  const int half = g.order() / 2;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int x = queue[head];
    for (int s : gens) push(g.mul(x, s));
    // A proper subgroup has index >= 2; once past half the order the
    // closure must be the whole group.
    if (static_cast<int>(queue.size()) > half) return full_set(g);
  }
  std::vector<int> out(queue.begin(), queue.end());
  return Subset(g, std::move(out));
}

struct Subgroup {
  Subset set;
  std::vector<int> gens;
};

// All subgroups reachable as closures of at most gen_bound generators,
// found layer by layer: each layer extends every known subgroup by one
// coset representative.  The trivial subgroup and the whole group are
// always present.  Results are sorted by (order, members).
inline std::vector<Subgroup> enumerate_subgroups(const FiniteGroup& g,
                                                 int gen_bound) {
  if (gen_bound < 1) throw ValidationError("enumerate_subgroups: gen_bound >= 1");
  std::map<std::vector<int>, std::vector<int>> found;  // members -> gens
  Subset triv = subgroup_closure(g, {});
  found.emplace(triv.members, std::vector<int>{});
  std::vector<Subgroup> frontier{{triv, {}}};
  for (int depth = 0; depth < gen_bound; ++depth) {
    std::vector<Subgroup> next;
    for (const auto& h : frontier) {
      std::vector<std::uint8_t> covered = h.set.mask();
      for (int x = 0; x < g.order(); ++x) {
        if (covered[static_cast<std::size_t>(x)]) continue;
        // Representatives of right cosets Hx: adjoining any element of the
        // same coset yields the same closure.
        for (int hh : h.set.members)
          covered[static_cast<std::size_t>(g.mul(hh, x))] = 1;
        std::vector<int> gens = h.gens;
        gens.push_back(x);
        Subset closed = subgroup_closure(g, gens);
        auto [it, fresh] = found.emplace(closed.members, gens);
        if (fresh) next.push_back({std::move(closed), std::move(gens)});
      }
    }
    frontier = std::move(next);
  }
  if (!found.count(full_set(g).members)) {
    // The whole group is part of the contract even when gen_bound is too
    // small to reach it; grow a generating set greedily.
    Subset cur = triv;
    std::vector<int> gens;
    while (cur.size() < g.order()) {
      const auto m = cur.mask();
      for (int x = 0; x < g.order(); ++x)
        if (!m[static_cast<std::size_t>(x)]) {
          gens.push_back(x);
          break;
        }
      cur = subgroup_closure(g, gens);
    }
    found.emplace(cur.members, gens);
  }
  std::vector<Subgroup> out;
  out.reserve(found.size());
  for (auto& [mem, gens] : found)
    out.push_back({Subset(g, mem), gens});
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.set.size() != b.set.size()) return a.set.size() < b.set.size();
    return a.set.members < b.set.members;
  });
  return out;
}

inline bool is_subgroup(const Subset& s) {
  if (s.empty() || !s.contains(s.group->identity())) return false;
  const auto m = s.mask();
  for (int a : s.members)
    for (int b : s.members)
      if (!m[static_cast<std::size_t>(s.group->mul(a, b))]) return false;
  return true;
}

inline Subset conjugacy_class(const FiniteGroup& g, int x) {
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.order()), 0);
  for (int h = 0; h < g.order(); ++h)
    seen[static_cast<std::size_t>(g.conj(h, x))] = 1;
  std::vector<int> out;
  for (int i = 0; i < g.order(); ++i)
    if (seen[static_cast<std::size_t>(i)]) out.push_back(i);
  return Subset(g, std::move(out));
}

inline std::vector<Subset> conjugacy_classes(const FiniteGroup& g) {
  std::vector<std::uint8_t> done(static_cast<std::size_t>(g.order()), 0);
  std::vector<Subset> out;
  for (int x = 0; x < g.order(); ++x) {
    if (done[static_cast<std::size_t>(x)]) continue;
    Subset c = conjugacy_class(g, x);
    for (int y : c.members) done[static_cast<std::size_t>(y)] = 1;
    out.push_back(std::move(c));
  }
  return out;
}

// Identity, inverses and associativity.  Associativity is checked in full
// up to order 256 and on at least 10^4 random triples above that.
inline void check_group_axioms(const FiniteGroup& g, Rng& rng) {
  const int n = g.order();
  const int e = g.identity();
  for (int a = 0; a < n; ++a) {
    if (g.mul(e, a) != a || g.mul(a, e) != a)
      throw ValidationError("identity law failed at " + g.label(a));
    if (g.mul(a, g.inverse(a)) != e || g.mul(g.inverse(a), a) != e)
      throw ValidationError("inverse law failed at " + g.label(a));
  }
  auto check_triple = [&](int a, int b, int c) {
    if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
      throw ValidationError("associativity failed");
  };
  if (n <= 256) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) check_triple(a, b, c);
  } else {
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < 10000; ++t)
      check_triple(pick(rng), pick(rng), pick(rng));
  }
}

}  // namespace fge
