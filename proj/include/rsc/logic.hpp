#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "rsc/experiment.hpp"
#include "rsc/measure.hpp"
#include "rsc/sampler.hpp"
#include "rsc/simplicial.hpp"

namespace rsc {

/// phi_B: every embedded copy of `base` extends to a copy of `extension`,
/// whose one extra vertex is `new_vertex`.
struct ExtensionAxiom {
  Structure base;
  Structure extension;
  Vertex new_vertex = 0;
};

/// Builds the axiom for a one-point extension; the new vertex is the one of
/// |b| outside |base| (by default the largest). Throws PreconditionFailed if
/// b is not a class member or not a one-point extension.
ExtensionAxiom make_axiom(const Structure& b, const LocalClassSpec& spec);
ExtensionAxiom make_axiom(const Structure& b, Vertex new_vertex, const LocalClassSpec& spec);

/// One axiom per isomorphism type of (A, B) with |B| <= size, isomorphisms
/// fixing the new vertex; B ranges over members on {0..m-1} with new vertex m-1.
std::vector<ExtensionAxiom> extension_axioms_up_to(const LocalClassSpec& spec, std::size_t size,
                                                   std::size_t cap = kDefaultEnumerationCap);

using Embedding = std::map<Vertex, Vertex>;

/// Calls fn for each induced embedding of `pattern` into `target` until fn
/// returns false. Search order: pattern vertices by decreasing tuple degree,
/// targets pruned by per-arity degree.
void for_each_embedding(const Structure& pattern, const Structure& target,
                        const std::function<bool(const Embedding&)>& fn);
std::optional<Embedding> find_embedding(const Structure& pattern, const Structure& target);

bool holds_extension(const Structure& s, const ExtensionAxiom& ax);

struct OracleCheckEntry {
  Embedding embedding;
  Vertex witness = 0;
  std::size_t candidates = 0;
};

struct OracleCheck {
  bool holds = true;
  std::vector<OracleCheckEntry> log;
};

/// Runs find_witness for every embedding of the base into the oracle's
/// restriction to {0..region-1}. WitnessNotFound propagates.
OracleCheck holds_extension_oracle(LazyLimit& l, const ExtensionAxiom& ax, std::size_t region);

/// Probability under the exact measure on N vertices that phi_B holds.
Rational exact_satisfaction_probability(const ExtensionAxiom& ax, std::size_t n,
                                        const LocalClassSpec& spec);

/// For each N, samples `trials` structures with seed.child(N).child(t) and
/// reports how many satisfy phi_B (or its negation). Requires trials >= 100.
ExperimentResult zero_one_experiment(const ExtensionAxiom& ax, const std::vector<std::size_t>& ns,
                                     std::size_t trials, const Seed& seed,
                                     const LocalClassSpec& spec, bool negate = false);

struct CollapseResult {
  SimplicialComplex reduced;
  bool collapsed_to_point = false;
  std::size_t collapses = 0;
};

/// Removes free pairs (a face with exactly one strictly larger face, plus
/// that face) until none remain. Picks the first free face in order of
/// decreasing size, then lexicographic. A point result certifies
/// contractibility; anything else is inconclusive.
CollapseResult greedy_collapse(const SimplicialComplex& sc);

/// Fraction of samples on n vertices (seed.child(t)) that collapse to a point.
ExperimentResult collapsibility_probe(std::size_t n, std::size_t samples, const Seed& seed);

}  // namespace rsc
