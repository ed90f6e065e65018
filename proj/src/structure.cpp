#include "rsc/structure.hpp"

#include <algorithm>
#include <array>

#include "rsc/errors.hpp"

namespace rsc {

Signature Signature::simplicial_family(int min_arity) {
  if (min_arity < 1) throw InvalidArgument("signature arities start at 1");
  Signature sig;
  sig.family_ = true;
  sig.min_arity_ = min_arity;
  return sig;
}

Signature Signature::finite(std::vector<RelationSymbol> symbols) {
  Signature sig;
  sig.family_ = false;
  int lowest = 0;
  for (auto& s : symbols) {
    if (s.arity < 1) throw InvalidArgument("relation '" + s.name + "' has arity < 1");
    if (s.arity == 1) s.symmetric = true;
    lowest = lowest == 0 ? s.arity : std::min(lowest, s.arity);
    sig.by_arity_[s.arity].push_back(s);
  }
  sig.min_arity_ = lowest == 0 ? 1 : lowest;
  return sig;
}

std::optional<int> Signature::max_arity() const {
  if (family_) return std::nullopt;
  if (by_arity_.empty()) return 0;
  return by_arity_.rbegin()->first;
}

int Signature::relation_count(int arity) const {
  if (family_) return arity >= min_arity_ ? 1 : 0;
  auto it = by_arity_.find(arity);
  return it == by_arity_.end() ? 0 : static_cast<int>(it->second.size());
}

std::vector<RelationId> Signature::relations_of_arity(int arity) const {
  std::vector<RelationId> out;
  const int count = relation_count(arity);
  for (int i = 0; i < count; ++i) out.push_back({arity, i});
  return out;
}

bool Signature::contains(RelationId id) const {
  return id.arity >= 1 && id.index >= 0 && id.index < relation_count(id.arity);
}

RelationSymbol Signature::symbol(RelationId id) const {
  if (!contains(id)) {
    throw UnknownRelation("no relation of arity " + std::to_string(id.arity) +
                          " with index " + std::to_string(id.index));
  }
  if (family_) return {"S" + std::to_string(id.arity - 1), id.arity, true};
  return by_arity_.at(id.arity)[static_cast<std::size_t>(id.index)];
}

bool Signature::is_symmetric(RelationId id) const {
  if (family_ || id.arity <= 1) return true;
  auto it = by_arity_.find(id.arity);
  if (it == by_arity_.end() || id.index < 0 ||
      id.index >= static_cast<int>(it->second.size())) {
    return true;
  }
  return it->second[static_cast<std::size_t>(id.index)].symmetric;
}

bool Signature::all_symmetric() const {
  if (family_) return true;
  for (const auto& [arity, syms] : by_arity_) {
    for (const auto& s : syms) {
      if (!s.symmetric) return false;
    }
  }
  return true;
}

std::optional<RelationId> Signature::find(std::string_view name) const {
  if (family_) {
    if (name.size() < 2 || name[0] != 'S') return std::nullopt;
    int i = 0;
    for (char c : name.substr(1)) {
      if (c < '0' || c > '9') return std::nullopt;
      i = i * 10 + (c - '0');
    }
    RelationId id{i + 1, 0};
    if (!contains(id)) return std::nullopt;
    return id;
  }
  for (const auto& [arity, syms] : by_arity_) {
    for (std::size_t i = 0; i < syms.size(); ++i) {
      if (syms[i].name == name) return RelationId{arity, static_cast<int>(i)};
    }
  }
  return std::nullopt;
}

bool Signature::operator==(const Signature& other) const {
  return family_ == other.family_ && min_arity_ == other.min_arity_ &&
         by_arity_ == other.by_arity_;
}

VertexSet make_vertex_set(std::vector<Vertex> vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

VertexSet range_set(Vertex n) {
  VertexSet out(n);
  for (Vertex i = 0; i < n; ++i) out[i] = i;
  return out;
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool has_repeats(std::span<const Vertex> tuple) {
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    for (std::size_t j = i + 1; j < tuple.size(); ++j) {
      if (tuple[i] == tuple[j]) return true;
    }
  }
  return false;
}

Structure::Structure(SignaturePtr signature, VertexSet universe)
    : signature_(std::move(signature)), universe_(make_vertex_set(std::move(universe))) {
  if (!signature_) throw InvalidArgument("structure requires a signature");
}

bool Structure::contains_vertex(Vertex v) const {
  return std::binary_search(universe_.begin(), universe_.end(), v);
}

Tuple Structure::canonical(RelationId rel, std::span<const Vertex> tuple) const {
  Tuple t(tuple.begin(), tuple.end());
  if (signature_->is_symmetric(rel)) std::sort(t.begin(), t.end());
  return t;
}

void Structure::add(RelationId rel, Tuple tuple) {
  if (!signature_->contains(rel)) {
    throw UnknownRelation("relation of arity " + std::to_string(rel.arity) +
                          " index " + std::to_string(rel.index) + " not in signature");
  }
  if (static_cast<int>(tuple.size()) != rel.arity) {
    throw InvalidTuple("tuple length does not match arity " + std::to_string(rel.arity));
  }
  if (has_repeats(tuple)) throw InvalidTuple("tuple has repeated entries (General Irreflexivity)");
  for (Vertex v : tuple) {
    if (!contains_vertex(v)) {
      throw InvalidTuple("tuple entry " + std::to_string(v) + " is outside the universe");
    }
  }
  rels_[rel].insert(canonical(rel, tuple));
}

void Structure::remove(RelationId rel, Tuple tuple) {
  auto it = rels_.find(rel);
  if (it == rels_.end()) return;
  it->second.erase(canonical(rel, tuple));
  if (it->second.empty()) rels_.erase(it);
}

bool Structure::holds(RelationId rel, std::span<const Vertex> tuple) const {
  if (static_cast<int>(tuple.size()) != rel.arity) return false;
  auto it = rels_.find(rel);
  if (it == rels_.end()) return false;
  if (has_repeats(tuple)) return false;
  if (rel.arity <= 1 || !signature_->is_symmetric(rel)) return it->second.count(tuple) != 0;
  constexpr std::size_t kInline = 16;
  if (tuple.size() <= kInline) {
    std::array<Vertex, kInline> buf;
    std::copy(tuple.begin(), tuple.end(), buf.begin());
    std::sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(tuple.size()));
    return it->second.count(std::span<const Vertex>(buf.data(), tuple.size())) != 0;
  }
  Tuple t(tuple.begin(), tuple.end());
  std::sort(t.begin(), t.end());
  return it->second.count(t) != 0;
}

const TupleSet& Structure::tuples(RelationId rel) const {
  static const TupleSet empty;
  auto it = rels_.find(rel);
  return it == rels_.end() ? empty : it->second;
}

std::vector<RelationId> Structure::relations() const {
  std::vector<RelationId> out;
  for (const auto& [rel, ts] : rels_) out.push_back(rel);
  return out;
}

std::size_t Structure::tuple_count() const {
  std::size_t n = 0;
  for (const auto& [rel, ts] : rels_) n += ts.size();
  return n;
}

int Structure::max_arity_present() const {
  return rels_.empty() ? 0 : rels_.rbegin()->first.arity;
}

bool Structure::operator==(const Structure& other) const {
  if (universe_ != other.universe_ || rels_ != other.rels_) return false;
  if (signature_ == other.signature_) return true;
  return signature_ && other.signature_ && *signature_ == *other.signature_;
}

bool Structure::operator<(const Structure& other) const {
  if (universe_ != other.universe_) return universe_ < other.universe_;
  return rels_ < other.rels_;
}

}  // namespace rsc
