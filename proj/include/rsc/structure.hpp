#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rsc {

using Vertex = std::uint32_t;
/// Ordered tuple of vertices. For symmetric relations the stored form is sorted.
using Tuple = std::vector<Vertex>;
/// Sorted, duplicate-free vertex list.
using VertexSet = std::vector<Vertex>;

/// Lexicographic order usable across vectors, spans and arrays of vertices.
struct TupleLess {
  using is_transparent = void;
  template <class A, class B>
  bool operator()(const A& a, const B& b) const {
    return std::lexicographical_compare(std::begin(a), std::end(a), std::begin(b), std::end(b));
  }
};
using TupleSet = std::set<Tuple, TupleLess>;

/// Identifies a relation symbol by arity and by its position among the
/// symbols of that arity. Locally finite signatures make this a finite index.
struct RelationId {
  int arity = 0;
  int index = 0;
  auto operator<=>(const RelationId&) const = default;
};

struct RelationSymbol {
  std::string name;
  int arity = 0;
  bool symmetric = true;
  bool operator==(const RelationSymbol&) const = default;
};

/// A locally finite relational signature: either an explicit finite list of
/// symbols, or the simplicial family {S_i} with one symmetric (i+1)-ary symbol
/// per arity starting at `min_arity`.
class Signature {
 public:
  static Signature simplicial_family(int min_arity);
  static Signature finite(std::vector<RelationSymbol> symbols);

  bool is_family() const noexcept { return family_; }
  int min_arity() const noexcept { return min_arity_; }
  /// nullopt for the unbounded family.
  std::optional<int> max_arity() const;

  int relation_count(int arity) const;
  std::vector<RelationId> relations_of_arity(int arity) const;
  RelationSymbol symbol(RelationId id) const;
  bool is_symmetric(RelationId id) const;
  bool contains(RelationId id) const;
  bool all_symmetric() const;
  std::optional<RelationId> find(std::string_view name) const;

  bool operator==(const Signature& other) const;

 private:
  bool family_ = false;
  int min_arity_ = 1;
  std::map<int, std::vector<RelationSymbol>> by_arity_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

/// Finite relational structure over a signature. Universe is a sorted set of
/// naturals; every stored tuple satisfies General Irreflexivity and lies in
/// the universe. Symmetric relations store each tuple in sorted order, so the
/// Symmetry schema holds by construction.
class Structure {
 public:
  Structure() = default;
  Structure(SignaturePtr signature, VertexSet universe);

  const SignaturePtr& signature_ptr() const noexcept { return signature_; }
  const Signature& signature() const { return *signature_; }
  const VertexSet& universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return universe_.size(); }
  bool contains_vertex(Vertex v) const;

  /// Adds a tuple; throws InvalidTuple on repeated entries or entries outside
  /// the universe, UnknownRelation on symbols outside the signature.
  void add(RelationId rel, Tuple tuple);
  void remove(RelationId rel, Tuple tuple);
  bool holds(RelationId rel, std::span<const Vertex> tuple) const;

  /// Tuples of `rel` (canonical order). Empty set when the relation is empty.
  const TupleSet& tuples(RelationId rel) const;
  /// Relations with nonempty interpretation, ascending.
  std::vector<RelationId> relations() const;
  const std::map<RelationId, TupleSet>& interpretations() const noexcept {
    return rels_;
  }
  std::size_t tuple_count() const;
  int max_arity_present() const;

  bool operator==(const Structure& other) const;
  /// Total order used for sets of structures in tests and enumerations.
  bool operator<(const Structure& other) const;

 private:
  Tuple canonical(RelationId rel, std::span<const Vertex> tuple) const;

  SignaturePtr signature_;
  VertexSet universe_;
  std::map<RelationId, TupleSet> rels_;
};

/// Sorted, deduplicated copy.
VertexSet make_vertex_set(std::vector<Vertex> vs);
VertexSet range_set(Vertex n);
bool is_subset(const VertexSet& a, const VertexSet& b);
bool has_repeats(std::span<const Vertex> tuple);

/// Calls `fn(subset)` for every k-subset of `set` in lexicographic order.
template <class Fn>
void for_each_subset_of_size(const VertexSet& set, std::size_t k, Fn&& fn) {
  const std::size_t n = set.size();
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  VertexSet subset(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = set[idx[i]];
    fn(static_cast<const VertexSet&>(subset));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace rsc
