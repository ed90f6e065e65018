#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsc/experiment.hpp"
#include "rsc/json_io.hpp"
#include "rsc/measure.hpp"
#include "rsc/sampler.hpp"

namespace rsc {

using VertexMap = std::map<Vertex, Vertex>;

/// A bijection |a| -> |b| preserving and reflecting every relation, if any.
std::optional<VertexMap> isomorphic(const Structure& a, const Structure& b);

struct AutomorphismGroup {
  BigInt order = 1;
  std::vector<VertexMap> generators;
};

/// Order via orbit sizes along a base (individualise, refine, search); the
/// generators are the automorphisms found while computing those orbits.
AutomorphismGroup automorphism_group(const Structure& s);

/// True iff the only automorphism is the identity. Decides on the 2-frame
/// first and only runs the full search when the 2-frame has symmetries.
bool is_rigid(const Structure& s);

/// Fraction of simplicial samples (seed.child(N).child(t)) that are rigid.
ExperimentResult rigidity_experiment(const std::vector<std::size_t>& ns, std::size_t trials,
                                     const Seed& seed);

/// Group given by its multiplication table; element 0 is the identity.
class FiniteGroup {
 public:
  /// Throws InvalidGroup unless the table is a group with identity 0.
  static FiniteGroup from_table(std::vector<std::vector<int>> table,
                                std::vector<std::string> labels = {});
  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  /// Permutations of {0..k-1} in lexicographic order; (a*b)(x) = a(b(x)).
  static FiniteGroup symmetric(int k);

  int order() const noexcept { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[a][b]; }
  int inverse(int a) const { return inverse_[a]; }
  const std::vector<std::vector<int>>& table() const noexcept { return table_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::string label(int a) const;

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  std::vector<std::string> labels_;
};

Json group_to_json(const FiniteGroup& g);
/// Accepts {"table": [[...]], "labels": [...]} or {"cyclic": n} / {"symmetric": k}.
FiniteGroup group_from_json(const Json& j);

/// Throws InvalidGroup unless `incl` is an injective homomorphism h -> g.
void validate_inclusion(const FiniteGroup& h, const FiniteGroup& g, const std::vector<int>& incl);
/// Z/m -> Z/n, k -> k * n/m. Requires m | n.
std::vector<int> cyclic_inclusion(int m, int n);
/// S_j -> S_k extending permutations by fixed points. Requires j <= k.
std::vector<int> symmetric_inclusion(int j, int k);

/// Action of a finite group on a finite vertex set inside the oracle.
struct PartialAction {
  FiniteGroup group;
  VertexSet domain;
  /// perms[g] is the bijection of `domain` given by g.
  std::vector<VertexMap> perms;

  Vertex act(int g, Vertex v) const { return perms.at(static_cast<std::size_t>(g)).at(v); }
};

/// The action of the trivial group on nothing, or of `g` on the empty set.
PartialAction empty_action(const FiniteGroup& g);
/// The action of `g` on `domain` through a homomorphism g -> Sym(domain),
/// given as one permutation per group element.
PartialAction make_action(const FiniteGroup& g, VertexSet domain, std::vector<VertexMap> perms);

/// Throws InvalidAction unless identity, composition and bijectivity hold and
/// every element is an automorphism of `ambient` (restricted to the domain).
void validate_action(const PartialAction& act, const Structure& ambient);

/// One-point extension: adds the orbit {v_h} with v_e = v and
/// h . v_g = v_{hg}. Relations on subsets with one new vertex are copied
/// from the oracle around v; subsets with several new vertices take the
/// first admissible choice per orbit. New vertices other than v are found by
/// witness search in increasing abstract order.
PartialAction extend_action(LazyLimit& l, const PartialAction& act, Vertex v);

/// Induces a free action of `h` (embedded in `g` by `incl`) up to `g`: the
/// domain becomes g x orbits, each coset carrying a translate of the input.
/// Throws NotFree if some stabiliser is nontrivial.
PartialAction induce_action(const FiniteGroup& g, const std::vector<int>& incl,
                            const PartialAction& act, LazyLimit& l);

/// groups[i] embeds in groups[i+1] via inclusions[i]. Step 0 extends the
/// empty action of groups[0]; step n induces up to groups[n] and then extends
/// by the least oracle vertex not yet absorbed.
std::vector<PartialAction> direct_limit_action(const std::vector<FiniteGroup>& groups,
                                               const std::vector<std::vector<int>>& inclusions,
                                               std::size_t steps, LazyLimit& l);

struct ActionAudit {
  bool restriction = true;
  bool action_axioms = true;
  bool free_off_base = true;
  bool equivariant = true;
  std::size_t faces_checked = 0;
  std::vector<std::string> problems;

  bool ok() const { return restriction && action_axioms && free_off_base && equivariant; }
};

/// Checks `after` against `before` (embedded by `incl`): the restriction
/// agrees, the action axioms hold on the oracle's induced structure,
/// stabilisers are trivial off the old domain, and every memoised decision
/// inside the new domain is matched by its translates.
ActionAudit audit_action(LazyLimit& l, const PartialAction& before, const PartialAction& after,
                         const std::vector<int>& incl);

Json action_to_json(const PartialAction& act);
Json audit_to_json(const ActionAudit& audit);

}  // namespace rsc
