#include <doctest.h>

#include <numeric>

#include "oracle.hpp"
#include "rsc/errors.hpp"
#include "rsc/logic.hpp"
#include "rsc/symmetry.hpp"

using namespace rsc;

namespace {

Structure complex_of(VertexSet vertices, std::vector<VertexSet> facets) {
  return SimplicialComplex::from_facets(std::move(vertices), facets).to_structure();
}

std::size_t brute_aut_order(const Structure& s) {
  std::vector<Vertex> p(s.universe().begin(), s.universe().end());
  std::size_t count = 0;
  do {
    VertexMap m;
    for (std::size_t i = 0; i < p.size(); ++i) m[s.universe()[i]] = p[i];
    count += relabel(s, m) == s;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

bool brute_isomorphic(const Structure& a, const Structure& b) {
  if (a.size() != b.size()) return false;
  std::vector<Vertex> p(b.universe().begin(), b.universe().end());
  do {
    VertexMap m;
    for (std::size_t i = 0; i < p.size(); ++i) m[a.universe()[i]] = p[i];
    if (relabel(a, m) == b) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

void check_aut(const Structure& s) {
  const auto g = automorphism_group(s);
  REQUIRE(g.order == brute_aut_order(s));
  for (const auto& gen : g.generators) CHECK(relabel(s, gen) == s);
}

Structure oriented_graph(unsigned n, unsigned code, const LocalClassSpec& spec) {
  Structure s(spec.signature_ptr(), range_set(n));
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) {
      const unsigned c = code % 3;
      code /= 3;
      if (c == 1) s.add({2, 0}, {a, b});
      if (c == 2) s.add({2, 0}, {b, a});
    }
  }
  return s;
}

}  // namespace

TEST_SUITE("symmetry") {
  TEST_CASE("isomorphism examples") {
    const auto path = complex_of({0, 1, 2}, {{0, 1}, {1, 2}});
    auto id = isomorphic(path, path);
    REQUIRE(id);
    CHECK(relabel(path, *id) == path);
    const auto moved = complex_of({0, 1, 2}, {{1, 2}, {2, 0}});
    auto m = isomorphic(path, moved);
    REQUIRE(m);
    CHECK(relabel(path, *m) == moved);
    CHECK_FALSE(isomorphic(complex_of({0, 1, 2}, {{0, 1}, {1, 2}, {0, 2}}), path));
    CHECK_FALSE(isomorphic(complex_of({0, 1, 2}, {{0, 1, 2}}), complex_of({0, 1, 2}, {{0, 1}, {1, 2}, {0, 2}})));
  }

  TEST_CASE("automorphism group examples") {
    std::size_t factorial = 1;
    for (Vertex n = 1; n <= 6; ++n) {
      factorial *= n;
      CHECK(automorphism_group(complex_of(range_set(n), {})).order == factorial);
    }
    CHECK(automorphism_group(complex_of({}, {})).order == 1);
    CHECK(automorphism_group(complex_of({0, 1, 2}, {{0, 1}, {1, 2}})).order == 2);
    CHECK(automorphism_group(complex_of({0, 1, 2}, {{0, 1, 2}})).order == 6);
  }

  TEST_CASE("automorphism orders match brute force") {
    struct Case {
      LocalClassSpec spec;
      unsigned max_n;
    };
    const Case cases[] = {{LocalClassSpec::simplicial(), 5},
                          {LocalClassSpec::sperner(), 4},
                          {LocalClassSpec::hypergraph(), 3}};
    for (const auto& c : cases) {
      for (unsigned n = 0; n <= c.max_n; ++n) {
        for (oracle::Family fam : oracle::all_members(c.spec.kind(), n)) {
          check_aut(oracle::to_structure(fam, n, c.spec));
        }
      }
    }
    for (std::uint64_t r = 0; r < 200; ++r) {
      check_aut(sample_finite(6, LocalClassSpec::simplicial(), Seed(31).child(r)));
    }
    auto sig = Signature::finite({{"E", 2, false}});
    auto oriented = LocalClassSpec::custom(sig, {{"Antisymmetry", {2, 0}, fo::neg(fo::atom({2, 0}, {1, 0})), false}});
    for (unsigned code = 0; code < 729; ++code) check_aut(oriented_graph(4, code, oriented));
  }

  TEST_CASE("isomorphism agrees with brute force") {
    const auto spec = LocalClassSpec::simplicial();
    const auto members = oracle::all_members(spec.kind(), 4);
    std::vector<Structure> all;
    for (auto f : members) all.push_back(oracle::to_structure(f, 4, spec));
    for (std::size_t i = 0; i < all.size(); i += 3) {
      for (std::size_t j = 0; j < all.size(); ++j) {
        const auto m = isomorphic(all[i], all[j]);
        REQUIRE(bool(m) == brute_isomorphic(all[i], all[j]));
        if (m) CHECK(relabel(all[i], *m) == all[j]);
      }
    }
    for (std::uint64_t r = 0; r < 100; ++r) {
      const auto s = sample_finite(6, spec, Seed(8).child(r));
      std::vector<Vertex> p(6);
      std::iota(p.begin(), p.end(), 0);
      std::rotate(p.begin(), p.begin() + static_cast<long>(r % 6), p.end());
      std::swap(p[0], p[r % 5 + 1]);
      VertexMap m;
      for (Vertex i = 0; i < 6; ++i) m[i] = p[i];
      const auto t = relabel(s, m);
      CHECK(isomorphic(s, t));
      CHECK(isomorphic(t, s));
    }
  }

  TEST_CASE("rigidity experiment") {
    auto r = rigidity_experiment({1, 2}, 100, Seed(1));
    CHECK(r.rows[0].estimate == 1.0);
    CHECK(r.rows[1].estimate == 0.0);
    auto big = rigidity_experiment({30}, 200, Seed(2));
    CHECK(big.rows[0].estimate >= 0.95);
    CHECK(to_csv(big) == to_csv(rigidity_experiment({30}, 200, Seed(2))));
    CHECK_THROWS_AS(rigidity_experiment({3}, 10, Seed(1)), InvalidArgument);
    CHECK(is_rigid(complex_of({0}, {})));
    CHECK_FALSE(is_rigid(complex_of({0, 1, 2}, {{0, 1}, {1, 2}})));
  }

  TEST_CASE("finite groups") {
    const auto z4 = FiniteGroup::cyclic(4);
    CHECK(z4.order() == 4);
    CHECK(z4.mul(3, 2) == 1);
    CHECK(z4.inverse(1) == 3);
    const auto s3 = FiniteGroup::symmetric(3);
    CHECK(s3.order() == 6);
    bool abelian = true;
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) abelian = abelian && s3.mul(a, b) == s3.mul(b, a);
    }
    CHECK_FALSE(abelian);
    CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1}, {1, 1}}), InvalidGroup);
    CHECK_THROWS_AS(FiniteGroup::from_table({{1, 0}, {0, 1}}), InvalidGroup);
    CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1, 2}, {1, 0, 2}, {2, 1, 0}}), InvalidGroup);
    CHECK_THROWS_AS(FiniteGroup::from_table({}), InvalidGroup);
    const auto back = group_from_json(group_to_json(s3));
    CHECK(back.table() == s3.table());
    CHECK(group_from_json(Json{{"cyclic", 3}}).order() == 3);
    CHECK_THROWS_AS(group_from_json(Json{{"table", "nope"}}), ConfigError);

    validate_inclusion(FiniteGroup::cyclic(2), z4, cyclic_inclusion(2, 4));
    CHECK_THROWS_AS(validate_inclusion(FiniteGroup::cyclic(2), z4, {0, 1}), InvalidGroup);
    CHECK_THROWS_AS(cyclic_inclusion(3, 4), InvalidGroup);
    validate_inclusion(FiniteGroup::symmetric(2), s3, symmetric_inclusion(2, 3));
  }

  TEST_CASE("extend_action") {
    const auto spec = LocalClassSpec::simplicial();
    LazyLimit l(spec, Seed(12));

    const auto trivial = FiniteGroup::trivial();
    auto t = extend_action(l, empty_action(trivial), 0);
    CHECK(t.domain == VertexSet{0});
    CHECK(audit_action(l, empty_action(trivial), t, {0}).ok());

    Vertex b = 1;
    while (!l.is_face({0, b})) ++b;
    const auto z2 = FiniteGroup::cyclic(2);
    const auto swap = make_action(z2, {0, b}, {{{0, 0}, {b, b}}, {{0, b}, {b, 0}}});
    validate_action(swap, l.induced({0, b}));
    Vertex fresh = 1 + (b == 1);
    auto ext = extend_action(l, swap, fresh);
    CHECK(ext.domain.size() == 4);
    const auto audit = audit_action(l, swap, ext, {0, 1});
    CHECK(audit.ok());
    CHECK(audit.faces_checked > 0);

    // Z/4 acting on the pair through Z/4 -> Z/2: elements 1, 3 swap.
    const auto z4 = FiniteGroup::cyclic(4);
    const VertexMap id{{0, 0}, {b, b}}, sw{{0, b}, {b, 0}};
    const auto quarter = make_action(z4, {0, b}, {id, sw, id, sw});
    auto e4 = extend_action(l, quarter, fresh);
    CHECK(e4.domain.size() == 6);
    CHECK(audit_action(l, quarter, e4, {0, 1, 2, 3}).ok());

    CHECK_THROWS_AS(extend_action(l, swap, 0), InvalidArgument);
    Vertex c = 1;
    while (l.is_face({0, c})) ++c;
    const auto bad = make_action(z2, {0, b, c}, {{{0, 0}, {b, b}, {c, c}}, {{0, b}, {b, c}, {c, 0}}});
    CHECK_THROWS_AS(extend_action(l, bad, 1000), InvalidAction);
  }

  TEST_CASE("induce_action") {
    const auto spec = LocalClassSpec::simplicial();
    LazyLimit l(spec, Seed(21));
    const auto trivial = FiniteGroup::trivial();
    const auto one = extend_action(l, empty_action(trivial), 0);
    const auto z2 = FiniteGroup::cyclic(2);
    auto up = induce_action(z2, {0}, one, l);
    CHECK(up.domain.size() == 2);
    CHECK(up.act(1, 0) != 0);
    CHECK(audit_action(l, one, up, {0}).ok());

    auto same = induce_action(trivial, {0}, one, l);
    CHECK(same.domain == one.domain);

    const auto free2 = extend_action(l, empty_action(z2), 5);
    const auto z4 = FiniteGroup::cyclic(4);
    auto four = induce_action(z4, cyclic_inclusion(2, 4), free2, l);
    CHECK(four.domain.size() == 4);
    const auto audit = audit_action(l, free2, four, cyclic_inclusion(2, 4));
    CHECK(audit.ok());

    const auto fixed = make_action(z2, {0}, {{{0, 0}}, {{0, 0}}});
    CHECK_THROWS_AS(induce_action(z4, cyclic_inclusion(2, 4), fixed, l), NotFree);
  }

  TEST_CASE("direct limits") {
    const auto spec = LocalClassSpec::simplicial();
    LazyLimit l(spec, Seed(5));
    const auto t = FiniteGroup::trivial();
    auto chain = direct_limit_action({t, t, t}, {{0}, {0}}, 3, l);
    REQUIRE(chain.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(chain[i].domain == range_set(static_cast<Vertex>(i + 1)));

    LazyLimit l2(spec, Seed(6));
    const std::vector<FiniteGroup> cyc{FiniteGroup::cyclic(2), FiniteGroup::cyclic(4)};
    auto c2 = direct_limit_action(cyc, {cyclic_inclusion(2, 4)}, 2, l2);
    CHECK(c2[0].domain.size() == 2);
    CHECK(c2[1].domain.size() == 8);
    CHECK(audit_action(l2, c2[0], c2[1], cyclic_inclusion(2, 4)).restriction);
    CHECK(audit_action(l2, c2[0], c2[1], cyclic_inclusion(2, 4)).ok());

    LazyLimit l3(spec, Seed(7), 2000000);
    const std::vector<FiniteGroup> sym{FiniteGroup::symmetric(1), FiniteGroup::symmetric(2), FiniteGroup::symmetric(3)};
    auto c3 = direct_limit_action(sym, {symmetric_inclusion(1, 2), symmetric_inclusion(2, 3)}, 3, l3);
    CHECK(c3[2].domain.size() == 4 * 3 + 6);
    CHECK(audit_action(l3, c3[1], c3[2], symmetric_inclusion(2, 3)).ok());
    CHECK_THROWS_AS(direct_limit_action(sym, {}, 4, l3), InvalidArgument);
  }

  TEST_CASE("actions over a custom symmetric class") {
    auto sig = Signature::finite({{"E", 2, true}, {"T", 3, true}});
    RelationId e{2, 0}, t{3, 0};
    auto spec = LocalClassSpec::custom(
        sig, {{"TriangleEdges", t, fo::conj({fo::atom(e, {0, 1}), fo::atom(e, {1, 2}), fo::atom(e, {0, 2})}), true}});
    LazyLimit l(spec, Seed(3));
    const auto z3 = FiniteGroup::cyclic(3);
    const auto before = empty_action(z3);
    auto ext = extend_action(l, before, 0);
    CHECK(ext.domain.size() == 3);
    CHECK(audit_action(l, before, ext, {0, 1, 2}).ok());
    const auto s3 = FiniteGroup::symmetric(3);
    // Z/3 sits in S_3 as the even permutations.
    std::vector<int> incl{0, 3, 4};
    validate_inclusion(z3, s3, incl);
    auto up = induce_action(s3, incl, ext, l);
    CHECK(up.domain.size() == 6);
    CHECK(audit_action(l, ext, up, incl).ok());
  }
}
