#pragma once

#include <cstddef>
#include <map>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "rsc/local_class.hpp"
#include "rsc/seed.hpp"

namespace rsc {

inline constexpr std::size_t kDefaultWitnessCap = 10000;
/// Family kinds decide every subset, so the generic sampler stops here.
inline constexpr std::size_t kFamilySampleLimit = 20;

struct SampleConfig {
  std::size_t n = 0;
  std::size_t trials = 1;
  Seed seed;
  std::size_t witness_cap = kDefaultWitnessCap;
};

/// A class member on {0..n-1} drawn from the frame-wise uniform measure. The
/// choice on each subset X is admissible[prf_index(prf(seed, X), count)], so
/// the result equals the LazyLimit with the same seed restricted to n.
Structure sample_finite(std::size_t n, const LocalClassSpec& spec, const Seed& seed);

/// Trial t uses seed.child(t); results are in trial order.
std::vector<Structure> sample_trials(const SampleConfig& config, const LocalClassSpec& spec);

struct VertexSetHash {
  std::size_t operator()(const VertexSet& s) const noexcept;
};

/// Lazily decided sample over the vertex set N. Each subset's choice is a pure
/// function of (seed, subset) given its lower frame; decisions are memoised
/// and the memo is safe for concurrent readers and writers.
class LazyLimit {
 public:
  LazyLimit(LocalClassSpec spec, Seed seed, std::size_t witness_cap = kDefaultWitnessCap);

  const LocalClassSpec& spec() const noexcept { return spec_; }
  const Seed& seed() const noexcept { return seed_; }
  std::size_t witness_cap() const noexcept { return witness_cap_; }
  void set_witness_cap(std::size_t cap) { witness_cap_ = cap; }

  /// Assignment over slots_on(signature, x); decides every proper subset first.
  Assignment decide(const VertexSet& x);
  /// Simplicial kind only; sets of size <= 1 are faces.
  bool is_face(const VertexSet& face);
  bool holds(RelationId rel, std::span<const Vertex> tuple);
  /// Induced substructure on x, deciding everything it needs.
  Structure induced(const VertexSet& x);

  std::map<VertexSet, Assignment> memo_snapshot() const;
  std::size_t memo_size() const;
  /// The raw hash driving the choice on x (no memo access).
  std::uint64_t hash_of(std::span<const Vertex> x) const { return prf(seed_.key(), x); }

 private:
  std::optional<Assignment> lookup(const VertexSet& x) const;
  void store(const VertexSet& x, Assignment a);

  LocalClassSpec spec_;
  Seed seed_;
  std::size_t witness_cap_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<VertexSet, Assignment, VertexSetHash> memo_;
};

struct WitnessResult {
  Vertex vertex = 0;
  std::size_t candidates_tried = 0;
  /// Per-candidate success probability, the measure ratio mu(B)/mu(A).
  double success_probability = 1.0;
};

/// Searches vertices 0,1,2,... (skipping the image of `embedding` and
/// `avoid`) for w such that image + w induces a copy of `b` with the new
/// vertex at w. `embedding` maps |A| = |b| minus one vertex into L. Throws
/// WitnessNotFound after L.witness_cap() candidates.
WitnessResult find_witness(LazyLimit& l, const std::map<Vertex, Vertex>& embedding,
                           const Structure& b, const VertexSet& avoid = {});

/// Product over subsets containing the new vertex of 1/choice-count.
double extension_probability(const Structure& b, Vertex new_vertex, const LocalClassSpec& spec);

}  // namespace rsc
