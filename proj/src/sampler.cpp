#include "rsc/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>

#include "rsc/errors.hpp"
#include "rsc/parallel.hpp"

namespace rsc {

namespace {

Structure sample_simplicial(std::size_t n, const LocalClassSpec& spec, std::uint64_t key) {
  Structure s(spec.signature_ptr(), range_set(static_cast<Vertex>(n)));
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> adj(n, std::vector<std::uint64_t>(words, 0));
  std::vector<VertexSet> level;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      const Vertex pair[2] = {i, j};
      if (prf_coin(key, pair)) {
        adj[i][j / 64] |= std::uint64_t{1} << (j % 64);
        adj[j][i / 64] |= std::uint64_t{1} << (i % 64);
        level.push_back({i, j});
      }
    }
  }
  std::vector<std::uint64_t> common(words);
  VertexSet candidate;
  VertexSet facet;
  while (!level.empty()) {
    const int arity = static_cast<int>(level.front().size());
    for (const auto& f : level) s.add({arity, 0}, f);
    // Each (m+1)-set is generated once, from its first m elements, so the
    // next level comes out sorted.
    std::vector<VertexSet> next;
    for (const auto& f : level) {
      std::fill(common.begin(), common.end(), ~std::uint64_t{0});
      for (Vertex u : f) {
        for (std::size_t w = 0; w < words; ++w) common[w] &= adj[u][w];
      }
      for (std::size_t w = f.back() / 64; w < words; ++w) {
        std::uint64_t bits = common[w];
        if (w == f.back() / 64) bits &= ~((std::uint64_t{2} << (f.back() % 64)) - 1);
        while (bits) {
          const Vertex v = static_cast<Vertex>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
          bits &= bits - 1;
          candidate = f;
          candidate.push_back(v);
          bool ok = true;
          for (std::size_t drop = 0; ok && drop + 1 < candidate.size(); ++drop) {
            facet.clear();
            for (std::size_t i = 0; i < candidate.size(); ++i) {
              if (i != drop) facet.push_back(candidate[i]);
            }
            ok = std::binary_search(level.begin(), level.end(), facet);
          }
          if (ok && prf_coin(key, candidate)) next.push_back(candidate);
        }
      }
    }
    level = std::move(next);
  }
  return s;
}

Structure sample_generic(std::size_t n, const LocalClassSpec& spec, std::uint64_t key) {
  if (spec.signature().is_family() && n > kFamilySampleLimit) {
    throw SizeLimit("sampling this class decides every subset; n is limited to " +
                    std::to_string(kFamilySampleLimit));
  }
  const VertexSet universe = range_set(static_cast<Vertex>(n));
  Structure s(spec.signature_ptr(), universe);
  const int top = spec.max_relevant_arity(n);
  for (int m = 1; m <= top; ++m) {
    for_each_subset_of_size(universe, static_cast<std::size_t>(m), [&](const VertexSet& x) {
      const auto options = admissible_assignments(spec, s, x);
      const Assignment a = options.size() == 1 ? options[0] : options[prf_index(prf(key, x), options.size())];
      if (a != 0) apply_assignment(s, slots_on(spec.signature(), x), a);
    });
  }
  return s;
}

}  // namespace

Structure sample_finite(std::size_t n, const LocalClassSpec& spec, const Seed& seed) {
  if (spec.kind() == ClassKind::SimplicialComplex) return sample_simplicial(n, spec, seed.key());
  return sample_generic(n, spec, seed.key());
}

std::vector<Structure> sample_trials(const SampleConfig& config, const LocalClassSpec& spec) {
  if (config.trials == 0) throw InvalidArgument("trials must be at least 1");
  std::vector<Structure> out(config.trials);
  parallel_for(config.trials, [&](std::size_t t) {
    out[t] = sample_finite(config.n, spec, config.seed.child(static_cast<std::uint64_t>(t)));
  });
  return out;
}

std::size_t VertexSetHash::operator()(const VertexSet& s) const noexcept {
  return static_cast<std::size_t>(prf(0x6a09e667f3bcc908ULL, s));
}

LazyLimit::LazyLimit(LocalClassSpec spec, Seed seed, std::size_t witness_cap)
    : spec_(std::move(spec)), seed_(std::move(seed)), witness_cap_(witness_cap) {}

std::optional<Assignment> LazyLimit::lookup(const VertexSet& x) const {
  std::shared_lock lock(mutex_);
  auto it = memo_.find(x);
  if (it == memo_.end()) return std::nullopt;
  return it->second;
}

void LazyLimit::store(const VertexSet& x, Assignment a) {
  std::unique_lock lock(mutex_);
  // Decisions are pure functions of (seed, x), so a racing writer stores the
  // same value and the first insert stands.
  memo_.emplace(x, a);
}

bool LazyLimit::is_face(const VertexSet& face) {
  if (spec_.kind() != ClassKind::SimplicialComplex) {
    throw InvalidArgument("is_face applies to the simplicial kind; use decide or holds");
  }
  if (face.size() <= 1) return true;
  if (auto hit = lookup(face)) return *hit != 0;
  bool all = true;
  if (face.size() > 2) {
    for_each_subset_of_size(face, face.size() - 1, [&](const VertexSet& f) {
      if (!is_face(f)) all = false;
    });
  }
  const bool result = all && prf_coin(seed_.key(), face);
  store(face, result ? 1 : 0);
  return result;
}

Assignment LazyLimit::decide(const VertexSet& x) {
  if (has_repeats(x) || !std::is_sorted(x.begin(), x.end())) {
    throw InvalidArgument("decide expects a sorted vertex set");
  }
  if (spec_.kind() == ClassKind::SimplicialComplex) return x.size() >= 2 && is_face(x) ? 1 : 0;
  if (x.empty()) return 0;
  const auto slots = slots_on(spec_.signature(), x);
  if (slots.empty()) return 0;
  if (auto hit = lookup(x)) return *hit;
  Structure lower(spec_.signature_ptr(), x);
  for (std::size_t m = 1; m < x.size(); ++m) {
    for_each_subset_of_size(x, m, [&](const VertexSet& y) {
      const Assignment a = decide(y);
      if (a != 0) apply_assignment(lower, slots_on(spec_.signature(), y), a);
    });
  }
  const auto options = admissible_assignments(spec_, lower, x);
  const Assignment a = options.size() == 1 ? options[0] : options[prf_index(hash_of(x), options.size())];
  store(x, a);
  return a;
}

bool LazyLimit::holds(RelationId rel, std::span<const Vertex> tuple) {
  if (static_cast<int>(tuple.size()) != rel.arity || has_repeats(tuple)) return false;
  if (!spec_.signature().contains(rel)) return false;
  VertexSet x(tuple.begin(), tuple.end());
  std::sort(x.begin(), x.end());
  const Assignment a = decide(x);
  const auto slots = slots_on(spec_.signature(), x);
  const bool sym = spec_.signature().is_symmetric(rel);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].rel != rel) continue;
    if (sym || std::equal(slots[i].tuple.begin(), slots[i].tuple.end(), tuple.begin(), tuple.end())) {
      return (a >> i) & 1;
    }
  }
  return false;
}

Structure LazyLimit::induced(const VertexSet& raw) {
  const VertexSet x = make_vertex_set(raw);
  Structure s(spec_.signature_ptr(), x);
  if (spec_.kind() == ClassKind::SimplicialComplex) {
    std::vector<VertexSet> level;
    for_each_subset_of_size(x, 2, [&](const VertexSet& e) {
      if (is_face(e)) level.push_back(e);
    });
    while (!level.empty()) {
      const int arity = static_cast<int>(level.front().size());
      for (const auto& f : level) s.add({arity, 0}, f);
      std::vector<VertexSet> next;
      for (const auto& f : level) {
        for (auto it = std::upper_bound(x.begin(), x.end(), f.back()); it != x.end(); ++it) {
          VertexSet g = f;
          g.push_back(*it);
          bool ok = true;
          for (std::size_t drop = 0; ok && drop + 1 < g.size(); ++drop) {
            VertexSet facet = g;
            facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(drop));
            ok = std::binary_search(level.begin(), level.end(), facet);
          }
          if (ok && is_face(g)) next.push_back(std::move(g));
        }
      }
      level = std::move(next);
    }
    return s;
  }
  if (spec_.signature().is_family() && x.size() > 24) {
    throw SizeLimit("induced substructure of this class on more than 24 vertices");
  }
  const int top = spec_.max_relevant_arity(x.size());
  for (int m = 1; m <= top; ++m) {
    for_each_subset_of_size(x, static_cast<std::size_t>(m), [&](const VertexSet& y) {
      const Assignment a = decide(y);
      if (a != 0) apply_assignment(s, slots_on(spec_.signature(), y), a);
    });
  }
  return s;
}

std::map<VertexSet, Assignment> LazyLimit::memo_snapshot() const {
  std::shared_lock lock(mutex_);
  return {memo_.begin(), memo_.end()};
}

std::size_t LazyLimit::memo_size() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

double extension_probability(const Structure& b, Vertex new_vertex, const LocalClassSpec& spec) {
  VertexSet rest;
  for (Vertex u : b.universe()) {
    if (u != new_vertex) rest.push_back(u);
  }
  double p = 1.0;
  for (std::size_t m = 0; m <= rest.size(); ++m) {
    for_each_subset_of_size(rest, m, [&](const VertexSet& y) {
      VertexSet x = y;
      x.insert(std::upper_bound(x.begin(), x.end(), new_vertex), new_vertex);
      p /= static_cast<double>(admissible_assignments(spec, b, x).size());
    });
  }
  return p;
}

namespace {

// One decision the witness must match: on image(Y) + w the choice index
// among `count` admissible assignments must be `expected`.
struct Check {
  VertexSet image;
  std::size_t count;
  std::size_t expected;
};

std::vector<VertexSet> domain_subsets_to_check(const Structure& b, const VertexSet& domain,
                                               Vertex v, const LocalClassSpec& spec) {
  std::vector<VertexSet> out;
  if (spec.kind() != ClassKind::SimplicialComplex) {
    if (spec.signature().is_family() && domain.size() > kFamilySampleLimit) {
      throw SizeLimit("witness search for this class is limited to " +
                      std::to_string(kFamilySampleLimit) + " anchor vertices");
    }
    for (std::size_t m = 0; m <= domain.size(); ++m) {
      for_each_subset_of_size(domain, m, [&](const VertexSet& y) { out.push_back(y); });
    }
    return out;
  }
  // Only Y whose every facet-with-v is a face in b carry a coin; they are
  // generated level by level from the link of v.
  auto with_v = [&](const VertexSet& y) {
    VertexSet x = y;
    x.insert(std::upper_bound(x.begin(), x.end(), v), v);
    return x;
  };
  std::vector<VertexSet> level;
  for (Vertex y : domain) {
    out.push_back({y});
    if (b.holds({2, 0}, std::vector<Vertex>{std::min(y, v), std::max(y, v)})) level.push_back({y});
  }
  while (!level.empty()) {
    std::vector<VertexSet> next;
    for (const auto& f : level) {
      for (auto it = std::upper_bound(domain.begin(), domain.end(), f.back()); it != domain.end(); ++it) {
        VertexSet g = f;
        g.push_back(*it);
        bool ok = b.holds({static_cast<int>(g.size()), 0}, g);
        for (std::size_t drop = 0; ok && drop + 1 < g.size(); ++drop) {
          VertexSet facet = g;
          facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(drop));
          ok = std::binary_search(level.begin(), level.end(), facet);
        }
        if (ok) next.push_back(std::move(g));
      }
    }
    for (const auto& g : next) out.push_back(g);
    std::vector<VertexSet> linked;
    for (const auto& g : next) {
      if (b.holds({static_cast<int>(g.size()) + 1, 0}, with_v(g))) linked.push_back(g);
    }
    level = std::move(linked);
  }
  return out;
}

}  // namespace

WitnessResult find_witness(LazyLimit& l, const std::map<Vertex, Vertex>& embedding,
                           const Structure& b, const VertexSet& avoid_raw) {
  const LocalClassSpec& spec = l.spec();
  require_member(b, spec, "extension B");
  VertexSet domain;
  std::vector<Vertex> image_list;
  for (const auto& [a, img] : embedding) {
    domain.push_back(a);
    image_list.push_back(img);
  }
  const VertexSet image = make_vertex_set(image_list);
  if (image.size() != image_list.size()) throw InvalidArgument("embedding is not injective");
  if (!is_subset(domain, b.universe()) || b.size() != domain.size() + 1) {
    throw InvalidArgument("B must be the embedding's domain plus exactly one new vertex");
  }
  Vertex v = 0;
  for (Vertex u : b.universe()) {
    if (!std::binary_search(domain.begin(), domain.end(), u)) v = u;
  }
  const Structure a = induced_substructure(b, domain);
  if (!(l.induced(image) == relabel(a, embedding))) {
    throw PreconditionFailed("the embedded image does not induce a copy of A in the oracle");
  }
  const VertexSet avoid = make_vertex_set(avoid_raw);

  auto map_set = [&](const VertexSet& y) {
    VertexSet out;
    for (Vertex u : y) out.push_back(embedding.at(u));
    std::sort(out.begin(), out.end());
    return out;
  };
  auto with_new = [](VertexSet x, Vertex w) {
    x.insert(std::upper_bound(x.begin(), x.end(), w), w);
    return x;
  };

  const bool symmetric = spec.signature().all_symmetric();
  const auto subsets = domain_subsets_to_check(b, domain, v, spec);
  std::vector<Check> checks;
  double p = 1.0;
  if (symmetric) {
    for (const auto& y : subsets) {
      const VertexSet xb = with_new(y, v);
      const auto options = admissible_assignments(spec, b, xb);
      if (options.size() <= 1) continue;
      const Assignment want = assignment_of(b, slots_on(spec.signature(), xb));
      auto pos = std::lower_bound(options.begin(), options.end(), want);
      if (pos == options.end() || *pos != want) throw NotInClass("B's choice is not admissible");
      checks.push_back({map_set(y), options.size(), static_cast<std::size_t>(pos - options.begin())});
      p /= static_cast<double>(options.size());
    }
  } else {
    p = extension_probability(b, v, spec);
  }

  std::size_t tried = 0;
  VertexSet scratch;
  for (Vertex w = 0; tried < l.witness_cap(); ++w) {
    if (std::binary_search(image.begin(), image.end(), w) ||
        std::binary_search(avoid.begin(), avoid.end(), w)) {
      continue;
    }
    ++tried;
    bool ok = true;
    if (symmetric) {
      for (const auto& c : checks) {
        scratch = with_new(c.image, w);
        if (prf_index(l.hash_of(scratch), c.count) != c.expected) {
          ok = false;
          break;
        }
      }
    } else {
      auto map = embedding;
      map[v] = w;
      const Structure target = relabel(b, map);
      for (const auto& y : subsets) {
        const VertexSet xl = with_new(map_set(y), w);
        const auto options = admissible_assignments(spec, target, xl);
        if (options.size() <= 1) continue;
        const auto want = assignment_of(target, slots_on(spec.signature(), xl));
        if (options[prf_index(l.hash_of(xl), options.size())] != want) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    auto map = embedding;
    map[v] = w;
    if (!(l.induced(with_new(image, w)) == relabel(b, map))) {
      throw std::logic_error("witness check disagrees with the oracle's decisions");
    }
    return {w, tried, p};
  }
  const double bound = std::pow(1.0 - p, static_cast<double>(tried));
  throw WitnessNotFound("no witness among " + std::to_string(tried) +
                            " candidates; per-candidate success probability 2^" +
                            std::to_string(std::log2(p)) + ", failure bound " + std::to_string(bound),
                        p, tried, bound);
}

}  // namespace rsc
