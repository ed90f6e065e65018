#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rsc/structure.hpp"

namespace rsc {

/// Quantifier-free formula over the variables x_0..x_{m-1} of a local sentence.
struct Formula {
  enum class Kind { True, False, Atom, Eq, Not, And, Or, Implies };
  Kind kind = Kind::True;
  RelationId rel{};
  std::vector<int> vars;  // Atom: argument variables; Eq: the two variables
  std::vector<std::shared_ptr<const Formula>> children;
};
using FormulaPtr = std::shared_ptr<const Formula>;

namespace fo {
FormulaPtr top();
FormulaPtr bottom();
FormulaPtr atom(RelationId rel, std::vector<int> vars);
FormulaPtr eq(int a, int b);
FormulaPtr neg(FormulaPtr f);
FormulaPtr conj(std::vector<FormulaPtr> fs);
FormulaPtr disj(std::vector<FormulaPtr> fs);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
}  // namespace fo

/// Evaluates `f` in `s` under x_i := assignment[i]. Atoms with repeated entries
/// are false (General Irreflexivity).
bool evaluate(const Formula& f, const Structure& s, std::span<const Vertex> assignment);
/// Largest variable index mentioned, or -1.
int max_variable(const Formula& f);

/// forall x_0..x_{m-1} (guard(x_0..x_{m-1}) -> body), m = guard arity.
struct LocalSentence {
  std::string name;
  RelationId guard{};
  FormulaPtr body;
  /// Set when the body is invariant under permuting the guard variables; for a
  /// symmetric guard the sentence then only needs the canonical ordering.
  bool body_symmetric = false;
};

enum class ClassKind { SimplicialComplex, Hypergraph, SpernerFamily, Custom };

const char* to_string(ClassKind kind);
ClassKind class_kind_from_string(const std::string& name);

/// A local class: signature plus the local sentences cutting it out. General
/// Irreflexivity is enforced structurally (tuples never repeat entries), and
/// for the built-in kinds the schemata are instantiated per arity on demand.
class LocalClassSpec {
 public:
  static LocalClassSpec simplicial();
  static LocalClassSpec hypergraph();
  static LocalClassSpec sperner();
  /// Throws InvalidArgument when a sentence is not local (unknown guard,
  /// body variables outside the guard).
  static LocalClassSpec custom(Signature signature, std::vector<LocalSentence> sentences);

  ClassKind kind() const noexcept { return kind_; }
  const Signature& signature() const { return *signature_; }
  const SignaturePtr& signature_ptr() const noexcept { return signature_; }

  /// Sentences whose guard has arity `arity`.
  std::vector<LocalSentence> sentences_guarded_at(int arity) const;
  /// Highest arity that can carry a relation on an n-element universe.
  int max_relevant_arity(std::size_t n) const;

  Structure empty_structure(VertexSet universe) const;

 private:
  ClassKind kind_ = ClassKind::Custom;
  SignaturePtr signature_;
  std::vector<LocalSentence> custom_;
};

struct Violation {
  std::string sentence;
  Tuple witness;
  bool operator==(const Violation&) const = default;
};

/// Every falsified (sentence, guard tuple) pair; empty iff `s` is in the class.
/// Throws UnknownRelation if `s` interprets a symbol outside the class signature.
std::vector<Violation> validate(const Structure& s, const LocalClassSpec& spec);
bool is_member(const Structure& s, const LocalClassSpec& spec);
void require_member(const Structure& s, const LocalClassSpec& spec, const std::string& what);

// ---------------------------------------------------------------------------
// Per-subset frame decisions.
//
// The relations carried by exactly the vertex set X (|X| = m) form a list of
// slots: one per symmetric m-ary relation, m! per asymmetric one (ordered by
// lexicographic permutations of sorted X). A choice for X is a bitmask over
// its slots. Membership of the m-frame factorises over m-subsets, so a choice
// on X is admissible iff the sentences guarded at arity m hold on X.

struct Slot {
  RelationId rel;
  Tuple tuple;
};
using Assignment = std::uint64_t;

std::vector<Slot> slots_on(const Signature& sig, const VertexSet& x);
Assignment assignment_of(const Structure& s, const std::vector<Slot>& slots);
void apply_assignment(Structure& s, const std::vector<Slot>& slots, Assignment a);

/// Admissible choices on `x`, ascending, given the lower frame of `lower` on
/// `x` (relations of arity |x| in `lower` are ignored).
std::vector<Assignment> admissible_assignments(const LocalClassSpec& spec,
                                               const Structure& lower, const VertexSet& x);

// ---------------------------------------------------------------------------
// Frames, substructures, subobjects, adoption.

/// Same universe; relations of arity > k cleared.
Structure k_frame(const Structure& s, int k);
/// Induced substructure on x; throws NotASubset.
Structure induced_substructure(const Structure& s, const VertexSet& x);
/// Image of `s` under an injective vertex map defined on its universe.
Structure relabel(const Structure& s, const std::map<Vertex, Vertex>& map);
/// |sub| within |s| and every tuple of `sub` holds in `s`.
bool is_subobject(const Structure& sub, const Structure& s);
/// Replaces the n-ary relations of `b` on the n-subsets of |a| by those of
/// `a_prime` keeping the (n-1)-frame; higher arities are repaired (simplicial)
/// or truncated (other kinds) so that the result stays in the class.
Structure adopt(const Structure& b, const Structure& a, const Structure& a_prime, int n,
                const LocalClassSpec& spec);

}  // namespace rsc
