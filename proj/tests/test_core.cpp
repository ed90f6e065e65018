#include <doctest.h>

#include "oracle.hpp"
#include "rsc/errors.hpp"
#include "rsc/json_io.hpp"
#include "rsc/local_class.hpp"
#include "rsc/simplicial.hpp"

using namespace rsc;

namespace {

Structure complex_of(VertexSet vertices, std::vector<VertexSet> faces) {
  SimplicialComplex sc;
  sc.vertices = std::move(vertices);
  for (auto& f : faces) sc.faces.insert(f);
  return sc.to_structure();
}

Structure filled_triangle() { return SimplicialComplex::from_facets({0, 1, 2}, {{0, 1, 2}}).to_structure(); }
Structure triangle_boundary() { return complex_of({0, 1, 2}, {{0, 1}, {0, 2}, {1, 2}}); }

LocalClassSpec spec_for(ClassKind k) {
  switch (k) {
    case ClassKind::SimplicialComplex:
      return LocalClassSpec::simplicial();
    case ClassKind::Hypergraph:
      return LocalClassSpec::hypergraph();
    default:
      return LocalClassSpec::sperner();
  }
}

// Every structure of the class kind's signature on {0..n-1}, members or not.
std::vector<Structure> all_structures(ClassKind kind, unsigned n) {
  const auto spec = spec_for(kind);
  std::vector<unsigned> cands;
  const unsigned lo = kind == ClassKind::SimplicialComplex ? 2 : 1;
  for (unsigned m = 1; m < (1u << n); ++m) {
    if (static_cast<unsigned>(std::popcount(m)) >= lo) cands.push_back(m);
  }
  std::vector<Structure> out;
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << cands.size()); ++pick) {
    oracle::Family fam = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if ((pick >> i) & 1) fam |= oracle::Family{1} << cands[i];
    }
    out.push_back(oracle::to_structure(fam, n, spec));
  }
  return out;
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("validate examples") {
    const auto sc = LocalClassSpec::simplicial();
    CHECK(validate(triangle_boundary(), sc).empty());

    Structure bad = complex_of({0, 1, 2}, {{0, 1, 2}});
    auto v = validate(bad, sc);
    REQUIRE(v.size() == 1);
    CHECK(v[0].sentence == "SubsetClosure[3]");
    CHECK(v[0].witness == Tuple{0, 1, 2});

    const auto sp = LocalClassSpec::sperner();
    Structure h(sp.signature_ptr(), {0, 1});
    h.add({1, 0}, {0});
    h.add({2, 0}, {0, 1});
    auto w = validate(h, sp);
    REQUIRE(w.size() == 1);
    CHECK(w[0].sentence == "NonSubset[2]");
    CHECK(validate(h, LocalClassSpec::hypergraph()).empty());
  }

  TEST_CASE("validate rejects symbols outside the signature") {
    Structure h(LocalClassSpec::hypergraph().signature_ptr(), {0, 1});
    h.add({1, 0}, {0});
    CHECK_THROWS_AS(validate(h, LocalClassSpec::simplicial()), UnknownRelation);
  }

  TEST_CASE("structure enforces irreflexivity and universe membership") {
    Structure s(simplicial_signature(), {0, 1, 2});
    CHECK_THROWS_AS(s.add({2, 0}, {1, 1}), InvalidTuple);
    CHECK_THROWS_AS(s.add({2, 0}, {1, 7}), InvalidTuple);
    CHECK_THROWS_AS(s.add({1, 0}, {1}), UnknownRelation);
    s.add({2, 0}, {2, 0});
    CHECK(s.holds({2, 0}, std::vector<Vertex>{0, 2}));
    CHECK(s.holds({2, 0}, std::vector<Vertex>{2, 0}));
    CHECK_FALSE(s.holds({2, 0}, std::vector<Vertex>{0, 0}));
  }

  TEST_CASE("validate agrees with the axioms on every structure with <= 4 vertices") {
    for (auto kind : {ClassKind::SimplicialComplex, ClassKind::Hypergraph, ClassKind::SpernerFamily}) {
      const auto spec = spec_for(kind);
      for (unsigned n = 0; n <= 4; ++n) {
        if (kind != ClassKind::SimplicialComplex && n == 4) continue;  // 2^15 structures per kind is covered below
        for (const auto& s : all_structures(kind, n)) {
          CHECK(validate(s, spec).empty() == oracle::member(kind, n, oracle::to_family(s)));
        }
      }
    }
    const auto sp = LocalClassSpec::sperner();
    const auto members = oracle::all_members(ClassKind::SpernerFamily, 4);
    std::size_t valid = 0;
    for (const auto& s : all_structures(ClassKind::SpernerFamily, 4)) valid += validate(s, sp).empty();
    CHECK(valid == members.size());
  }

  TEST_CASE("custom asymmetric class: oriented graphs") {
    auto sig = Signature::finite({{"E", 2, false}});
    RelationId e{2, 0};
    LocalSentence antisym{"Antisymmetry", e, fo::neg(fo::atom(e, {1, 0})), false};
    auto spec = LocalClassSpec::custom(sig, {antisym});
    const VertexSet u = range_set(3);
    std::vector<Tuple> arcs;
    for (Vertex a : u) {
      for (Vertex b : u) {
        if (a != b) arcs.push_back({a, b});
      }
    }
    std::size_t members = 0;
    for (unsigned pick = 0; pick < (1u << arcs.size()); ++pick) {
      Structure s(spec.signature_ptr(), u);
      bool oriented = true;
      for (std::size_t i = 0; i < arcs.size(); ++i) {
        if (!((pick >> i) & 1)) continue;
        s.add(e, arcs[i]);
        for (std::size_t j = 0; j < i; ++j) {
          if ((pick >> j) & 1 && arcs[j][0] == arcs[i][1] && arcs[j][1] == arcs[i][0]) oriented = false;
        }
      }
      CHECK(validate(s, spec).empty() == oriented);
      members += oriented;
    }
    CHECK(members == 27);  // 3 choices per unordered pair
    CHECK(admissible_assignments(spec, spec.empty_structure({0, 1}), {0, 1}).size() == 3);

    LocalSentence leaky{"Bad", e, fo::atom({2, 0}, {0, 2}), false};
    CHECK_THROWS_AS(LocalClassSpec::custom(sig, {leaky}), InvalidArgument);
  }

  TEST_CASE("k_frame examples and idempotence") {
    Structure ft = filled_triangle();
    CHECK(k_frame(ft, 2) == triangle_boundary());
    CHECK(k_frame(ft, 3) == ft);
    CHECK(k_frame(ft, 0).tuple_count() == 0);
    for (const auto& s : all_structures(ClassKind::SimplicialComplex, 4)) {
      for (int k = 0; k <= 4; ++k) {
        CHECK(k_frame(k_frame(s, k), k) == k_frame(s, k));
        for (int l = 0; l <= 4; ++l) CHECK(k_frame(k_frame(s, l), k) == k_frame(s, std::min(k, l)));
        CHECK(is_subobject(k_frame(s, k), s));
      }
      CHECK(k_frame(s, static_cast<int>(s.size())) == s);
    }
  }

  TEST_CASE("frames of members are members (all kinds, <= 4 vertices)") {
    for (auto kind : {ClassKind::SimplicialComplex, ClassKind::Hypergraph, ClassKind::SpernerFamily}) {
      const auto spec = spec_for(kind);
      for (unsigned n = 0; n <= 4; ++n) {
        for (auto fam : oracle::all_members(kind, n)) {
          const auto s = oracle::to_structure(fam, n, spec);
          for (int k = 0; k <= static_cast<int>(n); ++k) CHECK(is_member(k_frame(s, k), spec));
        }
      }
    }
  }

  TEST_CASE("induced substructure and subobject examples") {
    Structure ft = filled_triangle();
    Structure edge = complex_of({0, 1}, {{0, 1}});
    CHECK(induced_substructure(ft, {0, 1}) == edge);
    CHECK(induced_substructure(ft, {0, 1, 2}) == ft);
    Structure path = complex_of({0, 1, 2}, {{0, 1}, {1, 2}});
    CHECK(induced_substructure(path, {0, 2}) == complex_of({0, 2}, {}));
    CHECK_THROWS_AS(induced_substructure(path, {0, 5}), NotASubset);

    CHECK_FALSE(is_subobject(edge, complex_of({0, 1, 2}, {{0, 2}})));
    CHECK(is_subobject(triangle_boundary(), ft));
    CHECK_FALSE(is_subobject(ft, triangle_boundary()));
  }

  TEST_CASE("adopt examples") {
    const auto sc = LocalClassSpec::simplicial();
    Structure ft = filled_triangle();
    Structure edge = induced_substructure(ft, {0, 1});
    Structure no_edge = complex_of({0, 1}, {});
    CHECK(adopt(ft, edge, no_edge, 2, sc) == complex_of({0, 1, 2}, {{0, 2}, {1, 2}}));
    CHECK(adopt(ft, edge, edge, 2, sc) == ft);

    Structure b = complex_of({0, 1, 2, 3}, {{0, 1}, {2, 3}});
    Structure a = induced_substructure(b, {2, 3});
    CHECK(adopt(b, a, complex_of({2, 3}, {}), 2, sc) == complex_of({0, 1, 2, 3}, {{0, 1}}));

    Structure wrong_frame = complex_of({0, 1, 2}, {{0, 1}});
    CHECK_THROWS_AS(adopt(ft, induced_substructure(ft, {0, 1, 2}), wrong_frame, 3, sc), FrameMismatch);
    CHECK_THROWS_AS(adopt(complex_of({0, 1, 2}, {{0, 1, 2}}), edge, edge, 2, sc), NotInClass);
  }

  TEST_CASE("adopt postconditions hold exhaustively on <= 4 vertices") {
    for (auto kind : {ClassKind::SimplicialComplex, ClassKind::SpernerFamily, ClassKind::Hypergraph}) {
      const auto spec = spec_for(kind);
      const unsigned nmax = kind == ClassKind::Hypergraph ? 3 : 4;
      for (unsigned nv = 1; nv <= nmax; ++nv) {
        const auto members = oracle::all_members(kind, nv);
        std::vector<Structure> bs;
        for (auto fam : members) bs.push_back(oracle::to_structure(fam, nv, spec));
        for (const auto& b : bs) {
          for (unsigned sub = 1; sub < (1u << nv); ++sub) {
            VertexSet x;
            for (unsigned i = 0; i < nv; ++i) {
              if ((sub >> i) & 1) x.push_back(i);
            }
            const Structure a = induced_substructure(b, x);
            const auto a_members = oracle::all_members(kind, static_cast<unsigned>(x.size()));
            for (int n = spec.signature().min_arity(); n <= static_cast<int>(x.size()); ++n) {
              for (auto fam : a_members) {
                std::map<Vertex, Vertex> relabel_map;
                for (std::size_t i = 0; i < x.size(); ++i) relabel_map[static_cast<Vertex>(i)] = x[i];
                const Structure ap = relabel(oracle::to_structure(fam, static_cast<unsigned>(x.size()), spec), relabel_map);
                if (!(k_frame(ap, n - 1) == k_frame(a, n - 1))) continue;
                const Structure out = adopt(b, a, ap, n, spec);
                CHECK(is_member(out, spec));
                CHECK(k_frame(out, n - 1) == k_frame(b, n - 1));
                for (const auto& [rel, tuples] : out.interpretations()) {
                  if (rel.arity != n) continue;
                  for (const auto& t : tuples) {
                    const bool inside = is_subset(t, x);
                    CHECK(inside ? ap.holds(rel, t) : b.holds(rel, t));
                  }
                }
                for (const auto& t : b.tuples({n, 0})) {
                  if (!is_subset(t, x)) CHECK(out.holds({n, 0}, t));
                }
                for (const auto& t : ap.tuples({n, 0})) CHECK(out.holds({n, 0}, t));
              }
            }
          }
        }
      }
    }
  }

  TEST_CASE("simplicial complex helpers") {
    auto sc = SimplicialComplex::from_facets({0, 1, 2, 3, 4}, {{0, 1, 2}, {2, 3}});
    CHECK(sc.faces.size() == 5);
    CHECK(sc.is_downward_closed());
    CHECK(sc.maximal_faces() == std::vector<VertexSet>{{0, 1, 2}, {2, 3}, {4}});
    CHECK(sc.dimension() == 2);
    CHECK(SimplicialComplex::from_structure(sc.to_structure()) == sc);
    CHECK(sc.induced({0, 1, 3}).faces == std::set<VertexSet>{{0, 1}});
  }

  TEST_CASE("JSON round trip and loader checks") {
    for (auto kind : {ClassKind::SimplicialComplex, ClassKind::Hypergraph, ClassKind::SpernerFamily}) {
      const auto spec = spec_for(kind);
      for (auto fam : oracle::all_members(kind, 3)) {
        const auto s = oracle::to_structure(fam, 3, spec);
        const auto j = structure_to_json(s, kind);
        const auto back = structure_from_json(Json::parse(j.dump()));
        CHECK(back.structure == s);
        CHECK(back.spec.kind() == kind);
      }
    }
    Json facets = {{"class", "simplicial"}, {"vertices", {0, 1, 2, 3}}, {"faces", {{0, 1, 2}}}, {"facets_only", true}};
    CHECK(structure_from_json(facets).structure == SimplicialComplex::from_facets({0, 1, 2, 3}, {{0, 1, 2}}).to_structure());
    Json bad = {{"class", "simplicial"}, {"vertices", {0, 1, 2}}, {"faces", {{0, 1, 2}}}};
    CHECK_THROWS_AS(structure_from_json(bad), NotInClass);
    CHECK(structure_from_json(bad, false).structure.tuple_count() == 1);
    Json outside = {{"class", "simplicial"}, {"vertices", {0, 1}}, {"faces", {{0, 5}}}};
    CHECK_THROWS_AS(structure_from_json(outside), InvalidTuple);
    Json sperner_facets = {{"class", "sperner"}, {"vertices", {0}}, {"faces", Json::array()}, {"facets_only", true}};
    CHECK_THROWS_AS(structure_from_json(sperner_facets), ConfigError);
  }
}
