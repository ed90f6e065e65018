#pragma once

#include <set>
#include <vector>

#include "rsc/structure.hpp"

namespace rsc {

/// Shared signature of simplicial complexes under the vertex-implicit
/// convention (lowest arity 2, i.e. edges).
SignaturePtr simplicial_signature();

/// Abstract simplicial complex. Every vertex is a 0-face; `faces` holds the
/// faces with at least two vertices.
struct SimplicialComplex {
  VertexSet vertices;
  std::set<VertexSet> faces;

  /// Downward closure of `facets` (each facet's vertices are added too).
  static SimplicialComplex from_facets(VertexSet vertices, const std::vector<VertexSet>& facets);
  /// Reads the faces of a simplicial-signature structure.
  static SimplicialComplex from_structure(const Structure& s);
  Structure to_structure() const;

  /// Singletons of vertices and the empty set count as faces.
  bool is_face(const VertexSet& f) const;
  bool is_downward_closed() const;
  SimplicialComplex induced(const VertexSet& x) const;
  /// Faces not strictly contained in another face, isolated vertices included.
  std::vector<VertexSet> maximal_faces() const;
  /// Largest face size minus one; -1 for the empty complex.
  int dimension() const;
  bool operator==(const SimplicialComplex&) const = default;
};

}  // namespace rsc
