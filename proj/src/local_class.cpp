#include "rsc/local_class.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>

#include "rsc/errors.hpp"

namespace rsc {

namespace fo {
namespace {
FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
}  // namespace

FormulaPtr top() { return make({Formula::Kind::True, {}, {}, {}}); }
FormulaPtr bottom() { return make({Formula::Kind::False, {}, {}, {}}); }
FormulaPtr atom(RelationId rel, std::vector<int> vars) {
  return make({Formula::Kind::Atom, rel, std::move(vars), {}});
}
FormulaPtr eq(int a, int b) { return make({Formula::Kind::Eq, {}, {a, b}, {}}); }
FormulaPtr neg(FormulaPtr f) { return make({Formula::Kind::Not, {}, {}, {std::move(f)}}); }
FormulaPtr conj(std::vector<FormulaPtr> fs) {
  return make({Formula::Kind::And, {}, {}, std::move(fs)});
}
FormulaPtr disj(std::vector<FormulaPtr> fs) {
  return make({Formula::Kind::Or, {}, {}, std::move(fs)});
}
FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  return make({Formula::Kind::Implies, {}, {}, {std::move(a), std::move(b)}});
}
}  // namespace fo

bool evaluate(const Formula& f, const Structure& s, std::span<const Vertex> assignment) {
  switch (f.kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Atom: {
      std::array<Vertex, 16> buf{};
      std::vector<Vertex> big;
      std::span<Vertex> args;
      if (f.vars.size() <= buf.size()) {
        args = std::span<Vertex>(buf.data(), f.vars.size());
      } else {
        big.resize(f.vars.size());
        args = big;
      }
      for (std::size_t i = 0; i < f.vars.size(); ++i) {
        args[i] = assignment[static_cast<std::size_t>(f.vars[i])];
      }
      return s.holds(f.rel, args);
    }
    case Formula::Kind::Eq:
      return assignment[static_cast<std::size_t>(f.vars[0])] ==
             assignment[static_cast<std::size_t>(f.vars[1])];
    case Formula::Kind::Not:
      return !evaluate(*f.children[0], s, assignment);
    case Formula::Kind::And:
      for (const auto& c : f.children) {
        if (!evaluate(*c, s, assignment)) return false;
      }
      return true;
    case Formula::Kind::Or:
      for (const auto& c : f.children) {
        if (evaluate(*c, s, assignment)) return true;
      }
      return false;
    case Formula::Kind::Implies:
      return !evaluate(*f.children[0], s, assignment) || evaluate(*f.children[1], s, assignment);
  }
  return false;
}

int max_variable(const Formula& f) {
  int m = -1;
  for (int v : f.vars) m = std::max(m, v);
  for (const auto& c : f.children) m = std::max(m, max_variable(*c));
  return m;
}

const char* to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::SimplicialComplex:
      return "simplicial";
    case ClassKind::Hypergraph:
      return "hypergraph";
    case ClassKind::SpernerFamily:
      return "sperner";
    case ClassKind::Custom:
      return "custom";
  }
  return "custom";
}

ClassKind class_kind_from_string(const std::string& name) {
  if (name == "simplicial") return ClassKind::SimplicialComplex;
  if (name == "hypergraph") return ClassKind::Hypergraph;
  if (name == "sperner") return ClassKind::SpernerFamily;
  if (name == "custom") return ClassKind::Custom;
  throw ConfigError("unknown class '" + name + "' (expected simplicial, hypergraph or sperner)");
}

namespace {

SignaturePtr shared_family(int min_arity) {
  static const SignaturePtr two = std::make_shared<const Signature>(Signature::simplicial_family(2));
  static const SignaturePtr one = std::make_shared<const Signature>(Signature::simplicial_family(1));
  return min_arity == 2 ? two : one;
}

// Variables 0..m-1 with position `skip` removed.
std::vector<int> vars_without(int m, int skip) {
  std::vector<int> out;
  for (int i = 0; i < m; ++i) {
    if (i != skip) out.push_back(i);
  }
  return out;
}

void for_each_permutation(Tuple t, const std::function<bool(const Tuple&)>& fn) {
  std::sort(t.begin(), t.end());
  do {
    if (!fn(t)) return;
  } while (std::next_permutation(t.begin(), t.end()));
}

}  // namespace

LocalClassSpec LocalClassSpec::simplicial() {
  LocalClassSpec spec;
  spec.kind_ = ClassKind::SimplicialComplex;
  spec.signature_ = shared_family(2);
  return spec;
}

LocalClassSpec LocalClassSpec::hypergraph() {
  LocalClassSpec spec;
  spec.kind_ = ClassKind::Hypergraph;
  spec.signature_ = shared_family(1);
  return spec;
}

LocalClassSpec LocalClassSpec::sperner() {
  LocalClassSpec spec;
  spec.kind_ = ClassKind::SpernerFamily;
  spec.signature_ = shared_family(1);
  return spec;
}

LocalClassSpec LocalClassSpec::custom(Signature signature, std::vector<LocalSentence> sentences) {
  if (signature.is_family()) throw InvalidArgument("custom classes need a finite signature");
  LocalClassSpec spec;
  spec.kind_ = ClassKind::Custom;
  for (const auto& s : sentences) {
    if (!signature.contains(s.guard)) {
      throw InvalidArgument("sentence '" + s.name + "' is guarded by an unknown relation");
    }
    if (!s.body) throw InvalidArgument("sentence '" + s.name + "' has no body");
    if (max_variable(*s.body) >= s.guard.arity) {
      throw InvalidArgument("sentence '" + s.name + "' uses variables outside its guard");
    }
    std::function<void(const Formula&)> check = [&](const Formula& f) {
      if (f.kind == Formula::Kind::Atom &&
          (!signature.contains(f.rel) || static_cast<int>(f.vars.size()) != f.rel.arity)) {
        throw InvalidArgument("sentence '" + s.name + "' has a malformed atom");
      }
      if (f.kind == Formula::Kind::Eq && f.vars.size() != 2) {
        throw InvalidArgument("sentence '" + s.name + "' has a malformed equality");
      }
      for (const auto& c : f.children) check(*c);
    };
    check(*s.body);
  }
  spec.signature_ = std::make_shared<const Signature>(std::move(signature));
  spec.custom_ = std::move(sentences);
  return spec;
}

std::vector<LocalSentence> LocalClassSpec::sentences_guarded_at(int arity) const {
  std::vector<LocalSentence> out;
  switch (kind_) {
    case ClassKind::SimplicialComplex: {
      // Vertex-implicit: the guard S_{m-1} needs its (m-1)-subsets to be faces,
      // and edges need nothing.
      if (arity < 3) break;
      std::vector<FormulaPtr> parts;
      for (int i = 0; i < arity; ++i) parts.push_back(fo::atom({arity - 1, 0}, vars_without(arity, i)));
      out.push_back({"SubsetClosure[" + std::to_string(arity) + "]", {arity, 0},
                     fo::conj(std::move(parts)), true});
      break;
    }
    case ClassKind::Hypergraph:
      break;
    case ClassKind::SpernerFamily: {
      if (arity < 2) break;
      if (arity > 24) throw SizeLimit("Sperner sentences are instantiated up to arity 24");
      std::vector<FormulaPtr> parts;
      for (std::uint32_t mask = 1; mask + 1 < (1u << arity); ++mask) {
        std::vector<int> vars;
        for (int i = 0; i < arity; ++i) {
          if (mask & (1u << i)) vars.push_back(i);
        }
        parts.push_back(fo::neg(fo::atom({static_cast<int>(vars.size()), 0}, vars)));
      }
      out.push_back({"NonSubset[" + std::to_string(arity) + "]", {arity, 0},
                     fo::conj(std::move(parts)), true});
      break;
    }
    case ClassKind::Custom:
      for (const auto& s : custom_) {
        if (s.guard.arity == arity) out.push_back(s);
      }
      break;
  }
  return out;
}

int LocalClassSpec::max_relevant_arity(std::size_t n) const {
  const int cap = static_cast<int>(n);
  if (signature_->is_family()) return cap;
  return std::min(cap, signature_->max_arity().value_or(0));
}

Structure LocalClassSpec::empty_structure(VertexSet universe) const {
  return Structure(signature_, std::move(universe));
}

namespace {

// Checks one sentence on one stored guard tuple; returns the falsifying
// ordering, if any.
std::optional<Tuple> falsified_at(const LocalSentence& sentence, const Structure& s,
                                  const Tuple& stored) {
  const bool sym_guard = s.signature().is_symmetric(sentence.guard);
  if (!sym_guard || sentence.body_symmetric) {
    if (!evaluate(*sentence.body, s, stored)) return stored;
    return std::nullopt;
  }
  std::optional<Tuple> bad;
  for_each_permutation(stored, [&](const Tuple& t) {
    if (!evaluate(*sentence.body, s, t)) {
      bad = t;
      return false;
    }
    return true;
  });
  return bad;
}

}  // namespace

std::vector<Violation> validate(const Structure& s, const LocalClassSpec& spec) {
  const Signature& sig = spec.signature();
  for (const auto& [rel, tuples] : s.interpretations()) {
    if (!sig.contains(rel)) {
      throw UnknownRelation("structure interprets a relation of arity " +
                            std::to_string(rel.arity) + " outside the class signature");
    }
  }
  std::vector<Violation> out;
  std::map<int, std::vector<LocalSentence>> by_arity;
  for (const auto& [rel, tuples] : s.interpretations()) {
    auto it = by_arity.find(rel.arity);
    if (it == by_arity.end()) it = by_arity.emplace(rel.arity, spec.sentences_guarded_at(rel.arity)).first;
    for (const auto& sentence : it->second) {
      if (sentence.guard != rel) continue;
      for (const auto& t : tuples) {
        if (auto bad = falsified_at(sentence, s, t)) out.push_back({sentence.name, *bad});
      }
    }
  }
  return out;
}

bool is_member(const Structure& s, const LocalClassSpec& spec) { return validate(s, spec).empty(); }

void require_member(const Structure& s, const LocalClassSpec& spec, const std::string& what) {
  auto violations = validate(s, spec);
  if (violations.empty()) return;
  std::string msg = what + " is not in the class: " + violations.front().sentence + " fails at (";
  for (std::size_t i = 0; i < violations.front().witness.size(); ++i) {
    msg += (i ? "," : "") + std::to_string(violations.front().witness[i]);
  }
  msg += ")";
  if (violations.size() > 1) msg += " and " + std::to_string(violations.size() - 1) + " more";
  throw NotInClass(msg);
}

std::vector<Slot> slots_on(const Signature& sig, const VertexSet& x) {
  std::vector<Slot> slots;
  const int m = static_cast<int>(x.size());
  if (m == 0) return slots;
  for (RelationId rel : sig.relations_of_arity(m)) {
    if (sig.is_symmetric(rel)) {
      slots.push_back({rel, x});
    } else {
      Tuple t = x;
      do {
        slots.push_back({rel, t});
      } while (std::next_permutation(t.begin(), t.end()));
    }
  }
  return slots;
}

Assignment assignment_of(const Structure& s, const std::vector<Slot>& slots) {
  Assignment a = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (s.holds(slots[i].rel, slots[i].tuple)) a |= Assignment{1} << i;
  }
  return a;
}

void apply_assignment(Structure& s, const std::vector<Slot>& slots, Assignment a) {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (a & (Assignment{1} << i)) {
      s.add(slots[i].rel, slots[i].tuple);
    } else {
      s.remove(slots[i].rel, slots[i].tuple);
    }
  }
}

std::vector<Assignment> admissible_assignments(const LocalClassSpec& spec,
                                               const Structure& lower, const VertexSet& x) {
  const int m = static_cast<int>(x.size());
  const auto slots = slots_on(spec.signature(), x);
  if (slots.empty()) return {0};
  switch (spec.kind()) {
    case ClassKind::SimplicialComplex: {
      if (m >= 3) {
        bool ok = true;
        for_each_subset_of_size(x, x.size() - 1, [&](const VertexSet& y) {
          ok = ok && lower.holds({m - 1, 0}, y);
        });
        if (!ok) return {0};
      }
      return {0, 1};
    }
    case ClassKind::Hypergraph:
      return {0, 1};
    case ClassKind::SpernerFamily: {
      for (int size = 1; size < m; ++size) {
        bool hit = false;
        for_each_subset_of_size(x, static_cast<std::size_t>(size), [&](const VertexSet& y) {
          hit = hit || lower.holds({size, 0}, y);
        });
        if (hit) return {0};
      }
      return {0, 1};
    }
    case ClassKind::Custom:
      break;
  }
  if (slots.size() > 24) {
    throw SizeLimit("too many relation slots (" + std::to_string(slots.size()) +
                    ") on a single subset");
  }
  Structure local = induced_substructure(k_frame(lower, m - 1), x);
  const auto sentences = spec.sentences_guarded_at(m);
  std::vector<Assignment> out;
  const Assignment total = Assignment{1} << slots.size();
  for (Assignment a = 0; a < total; ++a) {
    apply_assignment(local, slots, a);
    bool ok = true;
    for (const auto& sentence : sentences) {
      for (std::size_t i = 0; ok && i < slots.size(); ++i) {
        if (slots[i].rel != sentence.guard || !(a & (Assignment{1} << i))) continue;
        ok = !falsified_at(sentence, local, slots[i].tuple).has_value();
      }
      if (!ok) break;
    }
    if (ok) out.push_back(a);
  }
  return out;
}

Structure k_frame(const Structure& s, int k) {
  Structure out(s.signature_ptr(), s.universe());
  for (const auto& [rel, tuples] : s.interpretations()) {
    if (rel.arity > k) continue;
    for (const auto& t : tuples) out.add(rel, t);
  }
  return out;
}

Structure induced_substructure(const Structure& s, const VertexSet& x) {
  VertexSet xs = make_vertex_set(x);
  if (!is_subset(xs, s.universe())) throw NotASubset("vertex set is not contained in the universe");
  Structure out(s.signature_ptr(), xs);
  for (const auto& [rel, tuples] : s.interpretations()) {
    if (rel.arity > static_cast<int>(xs.size())) continue;
    for (const auto& t : tuples) {
      bool inside = std::all_of(t.begin(), t.end(), [&](Vertex v) {
        return std::binary_search(xs.begin(), xs.end(), v);
      });
      if (inside) out.add(rel, t);
    }
  }
  return out;
}

Structure relabel(const Structure& s, const std::map<Vertex, Vertex>& map) {
  std::vector<Vertex> image;
  for (Vertex v : s.universe()) {
    auto it = map.find(v);
    if (it == map.end()) throw InvalidArgument("relabelling map misses vertex " + std::to_string(v));
    image.push_back(it->second);
  }
  const VertexSet universe = make_vertex_set(image);
  if (universe.size() != image.size()) throw InvalidArgument("relabelling map is not injective");
  Structure out(s.signature_ptr(), universe);
  for (const auto& [rel, tuples] : s.interpretations()) {
    for (const auto& t : tuples) {
      Tuple u;
      for (Vertex v : t) u.push_back(map.at(v));
      out.add(rel, u);
    }
  }
  return out;
}

bool is_subobject(const Structure& sub, const Structure& s) {
  if (!is_subset(sub.universe(), s.universe())) return false;
  for (const auto& [rel, tuples] : sub.interpretations()) {
    for (const auto& t : tuples) {
      if (!s.holds(rel, t)) return false;
    }
  }
  return true;
}

Structure adopt(const Structure& b, const Structure& a, const Structure& a_prime, int n,
                const LocalClassSpec& spec) {
  require_member(b, spec, "B");
  require_member(a, spec, "A");
  require_member(a_prime, spec, "A'");
  if (n < 1) throw InvalidArgument("adopt level must be positive");
  if (!is_subset(a.universe(), b.universe())) throw NotASubset("|A| is not contained in |B|");
  if (static_cast<int>(a.size()) < n) throw InvalidArgument("|A| must have at least n elements");
  if (!(induced_substructure(b, a.universe()) == a)) {
    throw PreconditionFailed("A is not the induced substructure of B on |A|");
  }
  if (a_prime.universe() != a.universe() || !(k_frame(a_prime, n - 1) == k_frame(a, n - 1))) {
    throw FrameMismatch("A' must share the universe and (n-1)-frame of A");
  }
  const VertexSet& in_a = a.universe();
  auto inside_a = [&](const Tuple& t) {
    return std::all_of(t.begin(), t.end(),
                       [&](Vertex v) { return std::binary_search(in_a.begin(), in_a.end(), v); });
  };

  Structure out(b.signature_ptr(), b.universe());
  for (const auto& [rel, tuples] : b.interpretations()) {
    if (rel.arity > n) continue;
    for (const auto& t : tuples) {
      if (rel.arity < n || !inside_a(t)) out.add(rel, t);
    }
  }
  for (const auto& [rel, tuples] : a_prime.interpretations()) {
    if (rel.arity != n) continue;
    for (const auto& t : tuples) out.add(rel, t);
  }
  if (spec.kind() != ClassKind::SimplicialComplex) return out;

  // Keep a higher face of B only if every n-subset survived; supersets of
  // added n-faces are never created.
  for (const auto& [rel, tuples] : b.interpretations()) {
    if (rel.arity <= n) continue;
    for (const auto& t : tuples) {
      bool keep = true;
      for_each_subset_of_size(t, static_cast<std::size_t>(n), [&](const VertexSet& y) {
        keep = keep && out.holds({n, 0}, y);
      });
      if (keep) out.add(rel, t);
    }
  }
  return out;
}

}  // namespace rsc
