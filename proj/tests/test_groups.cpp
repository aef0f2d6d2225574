#include <catch_amalgamated.hpp>

#include "fge/groups.hpp"

using namespace fge;

namespace {
GroupPtr G(const GroupSpec& s) { return build_group(s); }
}  // namespace

TEST_CASE("group orders match the classical formulas") {
  CHECK(G(GroupSpec::cyclic(5))->order() == 5);
  CHECK(G(GroupSpec::dihedral(4))->order() == 8);
  CHECK(G(GroupSpec::symmetric(3))->order() == 6);
  CHECK(G(GroupSpec::symmetric(4))->order() == 24);
  // |SL(2,p)| = p (p^2 - 1), confirmed by the enumeration itself.
  CHECK(G(GroupSpec::sl2(5))->order() == 120);
  CHECK(G(GroupSpec::sl2(7))->order() == 336);
  CHECK(G(GroupSpec::gl2(3))->order() == 48);
  CHECK(G(GroupSpec::borel2(5))->order() == 20);
  CHECK(G(GroupSpec::heisenberg(3))->order() == 27);
  CHECK(G(GroupSpec::product({GroupSpec::cyclic(3), GroupSpec::cyclic(4)}))
            ->order() == 12);
}

TEST_CASE("spec validation rejects bad parameters") {
  CHECK_THROWS_AS(GroupSpec::sl2(6).order(), ValidationError);
  CHECK_THROWS_AS(GroupSpec::additive(10, 2).order(), ValidationError);
  CHECK_THROWS_AS(build_group(GroupSpec::symmetric(8)), CapacityError);
}

TEST_CASE("group axioms hold for every kind") {
  Rng rng(7);
  for (const auto& spec :
       {GroupSpec::cyclic(12), GroupSpec::additive(5, 2), GroupSpec::dihedral(6),
        GroupSpec::symmetric(4), GroupSpec::sl2(3), GroupSpec::gl2(3),
        GroupSpec::borel2(5), GroupSpec::heisenberg(3),
        GroupSpec::product({GroupSpec::dihedral(3), GroupSpec::cyclic(2)})}) {
    auto g = G(spec);
    CHECK_NOTHROW(check_group_axioms(*g, rng));
  }
}

TEST_CASE("axioms hold on a lazy (no dense table) group") {
  auto g = build_group(GroupSpec::sl2(5), BuildOptions{.dense_cap = 10});
  REQUIRE_FALSE(g->has_dense_table());
  Rng rng(3);
  CHECK_NOTHROW(check_group_axioms(*g, rng));
}

TEST_CASE("labels are canonical and sorted") {
  auto g = G(GroupSpec::sl2(2));
  // Matrix coordinates ascend lexicographically.
  for (int i = 0; i + 1 < g->order(); ++i)
    CHECK(g->coordinates(i) < g->coordinates(i + 1));
  CHECK(g->label(g->identity()) == "[[1,0],[0,1]]");
}

TEST_CASE("product and inverse sets") {
  auto g = G(GroupSpec::cyclic(7));
  Subset a(*g, {1, 2});
  Subset b(*g, {2, 3});
  CHECK(product_set(a, b).members == std::vector<int>{3, 4, 5});
  CHECK(inverse_set(Subset(*g, {1, 3})).members == std::vector<int>{4, 6});
  // Involution.
  Subset r(*g, {0, 2, 5});
  CHECK(inverse_set(inverse_set(r)) == r);
  // Empty times anything is empty.
  CHECK(product_set(Subset(*g, {}), b).empty());
  auto g2 = G(GroupSpec::cyclic(5));
  Subset c(*g2, {0});
  CHECK_THROWS_AS(product_set(a, c), ValidationError);
}

TEST_CASE("closure of a subgroup is itself; product absorbs cosets") {
  auto g = G(GroupSpec::dihedral(4));
  Subset rot = subgroup_closure(*g, {g->index_of({1, 0})});
  CHECK(rot.size() == 4);  // the rotation subgroup
  CHECK(product_set(rot, rot) == rot);
  for (int x = 0; x < g->order(); ++x) {
    Subset coset = translate_left(x, rot);
    CHECK(product_set(coset, rot) == coset);
    CHECK(product_set(coset, rot).size() == rot.size());
  }
}

TEST_CASE("closure edge cases") {
  auto g = G(GroupSpec::cyclic(6));
  CHECK(subgroup_closure(*g, {}).members == std::vector<int>{0});
  CHECK(subgroup_closure(*g, {1}).size() == 6);
  CHECK(subgroup_closure(*g, {2}).members == std::vector<int>{0, 2, 4});
}

namespace {
// Brute-force oracle: every subset of a tiny group that is a subgroup.
std::vector<std::vector<int>> all_subgroups_brute(const FiniteGroup& g) {
  std::vector<std::vector<int>> out;
  const int n = g.order();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (!(mask & (1u << g.identity()))) continue;
    std::vector<int> mem;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) mem.push_back(i);
    Subset s(g, mem);
    if (is_subgroup(s)) out.push_back(s.members);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}
}  // namespace

TEST_CASE("subgroup enumeration is exhaustive on small groups") {
  // Dihedral(4) has ten subgroups, all 2-generated.
  auto g = G(GroupSpec::dihedral(4));
  auto subs = enumerate_subgroups(*g, 2);
  CHECK(subs.size() == 10);
  auto brute = all_subgroups_brute(*g);
  REQUIRE(subs.size() == brute.size());
  for (std::size_t i = 0; i < subs.size(); ++i)
    CHECK(subs[i].set.members == brute[i]);

  // Z_6 with one generator already yields the full divisor lattice.
  auto z6 = G(GroupSpec::cyclic(6));
  auto s6 = enumerate_subgroups(*z6, 1);
  std::vector<int> sizes;
  for (const auto& h : s6) sizes.push_back(h.set.size());
  CHECK(sizes == std::vector<int>{1, 2, 3, 6});

  // Prime order: only the trivial subgroup and the group itself.
  auto z7 = G(GroupSpec::cyclic(7));
  CHECK(enumerate_subgroups(*z7, 2).size() == 2);
}

TEST_CASE("gen_bound growth only adds subgroups") {
  auto g = G(GroupSpec::symmetric(4));
  auto one = enumerate_subgroups(*g, 1);
  auto two = enumerate_subgroups(*g, 2);
  REQUIRE(one.size() <= two.size());
  for (const auto& h : one) {
    bool found = false;
    for (const auto& h2 : two)
      if (h2.set.members == h.set.members) {
        found = true;
        break;
      }
    CHECK(found);
  }
}

TEST_CASE("Z_p^2 subgroup lattice: trivial + (p+1) lines + plane") {
  for (int p : {3, 5, 7}) {
    auto g = G(GroupSpec::additive(p, 2));
    auto subs = enumerate_subgroups(*g, 2);
    CHECK(static_cast<int>(subs.size()) == p + 3);
  }
}

TEST_CASE("conjugacy classes partition the group") {
  for (const auto& spec : {GroupSpec::symmetric(3), GroupSpec::dihedral(4),
                           GroupSpec::sl2(5), GroupSpec::heisenberg(3)}) {
    auto g = G(spec);
    auto classes = conjugacy_classes(*g);
    int total = 0;
    for (const auto& c : classes) total += c.size();
    CHECK(total == g->order());
    CHECK(conjugacy_class(*g, g->identity()).size() == 1);
  }
}

TEST_CASE("transpositions in S_3 form a class of size 3") {
  auto g = G(GroupSpec::symmetric(3));
  const int t = g->index_of({1, 0, 2});
  REQUIRE(t >= 0);
  CHECK(conjugacy_class(*g, t).size() == 3);
}

TEST_CASE("SL(2,5) regular semisimple classes have size p(p-1) or p(p+1)") {
  auto g = G(GroupSpec::sl2(5));
  std::vector<int> seen;
  for (int x = 0; x < g->order(); ++x) {
    const auto& c = g->coordinates(x);
    const int tr = (c[0] + c[3]) % 5;
    if (tr == 2 || tr == 3) continue;  // trace = +-2 mod 5
    seen.push_back(conjugacy_class(*g, x).size());
  }
  for (int s : seen) CHECK((s == 20 || s == 30));
}

TEST_CASE("A A^{-1} contains the identity") {
  auto g = G(GroupSpec::symmetric(4));
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    Subset a = random_subset(*g, 0.3, rng);
    if (a.empty()) continue;
    CHECK(product_set(a, inverse_set(a)).contains(g->identity()));
  }
}

TEST_CASE("group spec JSON round-trip") {
  auto spec = GroupSpec::parse(nlohmann::json::parse(R"({"kind":"SL2","p":5})"));
  CHECK(spec.key() == "SL2(5)");
  CHECK(GroupSpec::parse(spec.to_json()).key() == spec.key());
  auto prod = GroupSpec::parse(nlohmann::json::parse(
      R"({"kind":"product","factors":[{"kind":"cyclic","n":3},{"kind":"dihedral","n":4}]})"));
  CHECK(prod.order() == 24);
  CHECK(GroupSpec::parse(prod.to_json()).key() == prod.key());
  CHECK_THROWS_AS(GroupSpec::parse(nlohmann::json::parse(R"({"kind":"nope"})")),
                  ValidationError);
}
