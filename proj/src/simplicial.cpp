#include "rsc/simplicial.hpp"

#include <algorithm>

#include "rsc/errors.hpp"
#include "rsc/local_class.hpp"

namespace rsc {

SignaturePtr simplicial_signature() { return LocalClassSpec::simplicial().signature_ptr(); }

SimplicialComplex SimplicialComplex::from_facets(VertexSet vertices,
                                                 const std::vector<VertexSet>& facets) {
  SimplicialComplex sc;
  std::vector<Vertex> all = std::move(vertices);
  for (const auto& f : facets) all.insert(all.end(), f.begin(), f.end());
  sc.vertices = make_vertex_set(std::move(all));
  for (const auto& raw : facets) {
    VertexSet f = make_vertex_set(raw);
    if (f.size() != raw.size()) throw InvalidTuple("facet lists a vertex twice");
    for (std::size_t k = 2; k <= f.size(); ++k) {
      for_each_subset_of_size(f, k, [&](const VertexSet& y) { sc.faces.insert(y); });
    }
  }
  return sc;
}

SimplicialComplex SimplicialComplex::from_structure(const Structure& s) {
  if (s.signature().is_family() && s.signature().min_arity() == 1) {
    for (const auto& rel : s.relations()) {
      if (rel.arity == 1) throw UnknownRelation("simplicial complexes have no arity-1 relation");
    }
  }
  SimplicialComplex sc;
  sc.vertices = s.universe();
  for (const auto& [rel, tuples] : s.interpretations()) {
    if (rel.index != 0 || rel.arity < 2) throw UnknownRelation("not a simplicial-signature structure");
    sc.faces.insert(tuples.begin(), tuples.end());
  }
  return sc;
}

Structure SimplicialComplex::to_structure() const {
  Structure s(simplicial_signature(), vertices);
  for (const auto& f : faces) s.add({static_cast<int>(f.size()), 0}, f);
  return s;
}

bool SimplicialComplex::is_face(const VertexSet& f) const {
  if (f.empty()) return true;
  if (f.size() == 1) return std::binary_search(vertices.begin(), vertices.end(), f[0]);
  return faces.count(f) != 0;
}

bool SimplicialComplex::is_downward_closed() const {
  for (const auto& f : faces) {
    if (!is_subset(f, vertices)) return false;
    if (f.size() < 3) continue;
    bool ok = true;
    for_each_subset_of_size(f, f.size() - 1, [&](const VertexSet& y) { ok = ok && faces.count(y); });
    if (!ok) return false;
  }
  return true;
}

SimplicialComplex SimplicialComplex::induced(const VertexSet& x) const {
  VertexSet xs = make_vertex_set(x);
  if (!is_subset(xs, vertices)) throw NotASubset("vertex set is not contained in the complex");
  SimplicialComplex out;
  out.vertices = xs;
  for (const auto& f : faces) {
    if (is_subset(f, xs)) out.faces.insert(f);
  }
  return out;
}

std::vector<VertexSet> SimplicialComplex::maximal_faces() const {
  std::vector<VertexSet> out;
  std::set<Vertex> covered;
  std::vector<const VertexSet*> by_size;
  for (const auto& f : faces) by_size.push_back(&f);
  std::stable_sort(by_size.begin(), by_size.end(),
                   [](const VertexSet* a, const VertexSet* b) { return a->size() > b->size(); });
  for (const VertexSet* f : by_size) {
    bool maximal = std::none_of(out.begin(), out.end(), [&](const VertexSet& g) {
      return g.size() > f->size() && is_subset(*f, g);
    });
    if (maximal) out.push_back(*f);
    covered.insert(f->begin(), f->end());
  }
  for (Vertex v : vertices) {
    if (!covered.count(v)) out.push_back({v});
  }
  std::sort(out.begin(), out.end());
  return out;
}

int SimplicialComplex::dimension() const {
  if (vertices.empty()) return -1;
  std::size_t m = 1;
  for (const auto& f : faces) m = std::max(m, f.size());
  return static_cast<int>(m) - 1;
}

}  // namespace rsc
