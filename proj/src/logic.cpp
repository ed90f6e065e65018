#include "rsc/logic.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "rsc/errors.hpp"
#include "rsc/parallel.hpp"

namespace rsc {

namespace {

// Whether pattern on pv and target on tv (matched position by position) carry
// the same relations of arity |pv|.
bool agree_on(const Structure& pattern, std::vector<Vertex> pv, const Structure& target,
              std::vector<Vertex> tv) {
  const int m = static_cast<int>(pv.size());
  const Signature& sig = pattern.signature();
  for (RelationId rel : sig.relations_of_arity(m)) {
    if (sig.is_symmetric(rel)) {
      if (pattern.holds(rel, pv) != target.holds(rel, tv)) return false;
      continue;
    }
    std::vector<std::size_t> perm(pv.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Vertex> p(pv.size()), t(tv.size());
    do {
      for (std::size_t i = 0; i < perm.size(); ++i) {
        p[i] = pv[perm[i]];
        t[i] = tv[perm[i]];
      }
      if (pattern.holds(rel, p) != target.holds(rel, t)) return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return true;
}

// Per-vertex count of tuples, by arity.
std::map<Vertex, std::map<int, std::size_t>> degree_profile(const Structure& s) {
  std::map<Vertex, std::map<int, std::size_t>> out;
  for (Vertex v : s.universe()) out[v];
  for (const auto& [rel, tuples] : s.interpretations()) {
    for (const auto& t : tuples) {
      for (Vertex v : t) ++out[v][rel.arity];
    }
  }
  return out;
}

std::size_t total_degree(const std::map<int, std::size_t>& d) {
  std::size_t n = 0;
  for (const auto& [arity, c] : d) n += c;
  return n;
}

// Relations on every subset of `chosen` plus `extra`, which must include extra.
bool consistent_with(const Structure& pattern, const std::vector<Vertex>& pv, Vertex p_extra,
                     const Structure& target, const std::vector<Vertex>& tv, Vertex t_extra,
                     int min_arity, int max_arity) {
  const std::size_t k = pv.size();
  std::vector<Vertex> ps, ts;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    const int size = std::popcount(mask) + 1;
    if (size < min_arity || size > max_arity) continue;
    ps.clear();
    ts.clear();
    for (std::size_t i = 0; i < k; ++i) {
      if ((mask >> i) & 1) {
        ps.push_back(pv[i]);
        ts.push_back(tv[i]);
      }
    }
    ps.push_back(p_extra);
    ts.push_back(t_extra);
    if (!agree_on(pattern, ps, target, ts)) return false;
  }
  return true;
}

int max_arity_for(const Structure& s, std::size_t n) {
  const auto top = s.signature().max_arity();
  return top ? std::min(*top, static_cast<int>(n)) : static_cast<int>(n);
}

}  // namespace

ExtensionAxiom make_axiom(const Structure& b, Vertex new_vertex, const LocalClassSpec& spec) {
  if (!b.contains_vertex(new_vertex)) throw PreconditionFailed("new vertex is not in |B|");
  auto violations = validate(b, spec);
  if (!violations.empty()) {
    throw PreconditionFailed("extension B is not in the class (" + violations.front().sentence + ")");
  }
  VertexSet rest;
  for (Vertex u : b.universe()) {
    if (u != new_vertex) rest.push_back(u);
  }
  return {induced_substructure(b, rest), b, new_vertex};
}

ExtensionAxiom make_axiom(const Structure& b, const LocalClassSpec& spec) {
  if (b.size() == 0) throw PreconditionFailed("B must have at least one vertex");
  return make_axiom(b, b.universe().back(), spec);
}

std::vector<ExtensionAxiom> extension_axioms_up_to(const LocalClassSpec& spec, std::size_t size,
                                                   std::size_t cap) {
  if (size > cap) throw SizeLimit("axiom size exceeds the enumeration cap");
  std::vector<ExtensionAxiom> out;
  for (std::size_t m = 1; m <= size; ++m) {
    const VertexSet u = range_set(static_cast<Vertex>(m));
    auto fam = enumerate_frame_extensions(u, static_cast<int>(m), spec.empty_structure({}), 0, spec, cap);
    std::set<Structure> seen;
    std::vector<Vertex> perm(m - 1);
    std::iota(perm.begin(), perm.end(), 0);
    for (const auto& b : fam.members) {
      std::optional<Structure> key;
      std::vector<Vertex> p = perm;
      do {
        Embedding map;
        for (std::size_t i = 0; i + 1 < m; ++i) map[static_cast<Vertex>(i)] = p[i];
        map[static_cast<Vertex>(m - 1)] = static_cast<Vertex>(m - 1);
        Structure image = relabel(b, map);
        if (!key || image < *key) key = std::move(image);
      } while (std::next_permutation(p.begin(), p.end()));
      if (seen.insert(*key).second) out.push_back(make_axiom(b, static_cast<Vertex>(m - 1), spec));
    }
  }
  return out;
}

void for_each_embedding(const Structure& pattern, const Structure& target,
                        const std::function<bool(const Embedding&)>& fn) {
  const auto pdeg = degree_profile(pattern);
  const auto tdeg = degree_profile(target);
  std::vector<Vertex> order(pattern.universe().begin(), pattern.universe().end());
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return total_degree(pdeg.at(a)) > total_degree(pdeg.at(b));
  });
  const int min_arity = pattern.signature().min_arity();
  const int max_arity = max_arity_for(pattern, pattern.size());
  auto dominates = [&](Vertex t, Vertex p) {
    const auto& td = tdeg.at(t);
    for (const auto& [arity, c] : pdeg.at(p)) {
      auto it = td.find(arity);
      if (it == td.end() || it->second < c) return false;
    }
    return true;
  };

  std::vector<Vertex> pv, tv;
  std::set<Vertex> used;
  Embedding current;
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (stop) return;
    if (i == order.size()) {
      if (!fn(current)) stop = true;
      return;
    }
    const Vertex p = order[i];
    for (Vertex t : target.universe()) {
      if (used.count(t) || !dominates(t, p)) continue;
      if (!consistent_with(pattern, pv, p, target, tv, t, min_arity, max_arity)) continue;
      pv.push_back(p);
      tv.push_back(t);
      used.insert(t);
      current[p] = t;
      rec(i + 1);
      current.erase(p);
      used.erase(t);
      pv.pop_back();
      tv.pop_back();
      if (stop) return;
    }
  };
  rec(0);
}

std::optional<Embedding> find_embedding(const Structure& pattern, const Structure& target) {
  std::optional<Embedding> found;
  for_each_embedding(pattern, target, [&](const Embedding& e) {
    found = e;
    return false;
  });
  return found;
}

bool holds_extension(const Structure& s, const ExtensionAxiom& ax) {
  const Structure& b = ax.extension;
  const int min_arity = b.signature().min_arity();
  const int max_arity = max_arity_for(b, b.size());
  bool all = true;
  for_each_embedding(ax.base, s, [&](const Embedding& e) {
    std::vector<Vertex> pv, tv;
    for (const auto& [p, t] : e) {
      pv.push_back(p);
      tv.push_back(t);
    }
    for (Vertex w : s.universe()) {
      if (std::find(tv.begin(), tv.end(), w) != tv.end()) continue;
      if (consistent_with(b, pv, ax.new_vertex, s, tv, w, min_arity, max_arity)) return true;
    }
    all = false;
    return false;
  });
  return all;
}

OracleCheck holds_extension_oracle(LazyLimit& l, const ExtensionAxiom& ax, std::size_t region) {
  auto violations = validate(ax.extension, l.spec());
  if (!violations.empty()) throw PreconditionFailed("axiom extension is not in the oracle's class");
  OracleCheck out;
  const Structure window = l.induced(range_set(static_cast<Vertex>(region)));
  std::vector<Embedding> embeddings;
  for_each_embedding(ax.base, window, [&](const Embedding& e) {
    embeddings.push_back(e);
    return true;
  });
  for (const auto& e : embeddings) {
    const auto r = find_witness(l, e, ax.extension);
    out.log.push_back({e, r.vertex, r.candidates_tried});
  }
  return out;
}

Rational exact_satisfaction_probability(const ExtensionAxiom& ax, std::size_t n,
                                        const LocalClassSpec& spec) {
  Rational p = 0;
  for (const auto& [s, mu] : exact_distribution(n, spec)) {
    if (holds_extension(s, ax)) p += mu;
  }
  return p;
}

ExperimentResult zero_one_experiment(const ExtensionAxiom& ax, const std::vector<std::size_t>& ns,
                                     std::size_t trials, const Seed& seed,
                                     const LocalClassSpec& spec, bool negate) {
  if (trials < 100) throw InvalidArgument("zero-one experiments need at least 100 trials");
  ExperimentResult result;
  for (std::size_t n : ns) {
    std::vector<char> sat(trials, 0);
    const Seed level = seed.child(static_cast<std::uint64_t>(n));
    parallel_for(trials, [&](std::size_t t) {
      const Structure s = sample_finite(n, spec, level.child(static_cast<std::uint64_t>(t)));
      sat[t] = holds_extension(s, ax) != negate;
    });
    const auto hits = static_cast<std::size_t>(std::count(sat.begin(), sat.end(), 1));
    result.rows.push_back(make_row(n, trials, hits, negate ? 0.0 : 1.0));
  }
  return result;
}

CollapseResult greedy_collapse(const SimplicialComplex& sc) {
  std::set<VertexSet> faces(sc.faces.begin(), sc.faces.end());
  for (Vertex v : sc.vertices) faces.insert({v});
  auto cofacets = [&](const VertexSet& f) {
    std::vector<VertexSet> out;
    for (Vertex u : sc.vertices) {
      if (std::binary_search(f.begin(), f.end(), u)) continue;
      VertexSet g = f;
      g.insert(std::upper_bound(g.begin(), g.end(), u), u);
      if (faces.count(g)) out.push_back(std::move(g));
    }
    return out;
  };
  CollapseResult result;
  while (true) {
    std::vector<VertexSet> order(faces.begin(), faces.end());
    std::stable_sort(order.begin(), order.end(),
                     [](const VertexSet& a, const VertexSet& b) { return a.size() > b.size(); });
    bool collapsed = false;
    for (const auto& f : order) {
      auto up = cofacets(f);
      if (up.size() != 1 || !cofacets(up[0]).empty()) continue;
      faces.erase(f);
      faces.erase(up[0]);
      ++result.collapses;
      collapsed = true;
      break;
    }
    if (!collapsed) break;
  }
  for (const auto& f : faces) {
    if (f.size() == 1) {
      result.reduced.vertices.push_back(f[0]);
    } else {
      result.reduced.faces.insert(f);
    }
  }
  std::sort(result.reduced.vertices.begin(), result.reduced.vertices.end());
  result.collapsed_to_point = faces.size() == 1;
  return result;
}

ExperimentResult collapsibility_probe(std::size_t n, std::size_t samples, const Seed& seed) {
  if (samples == 0) throw InvalidArgument("probe needs at least one sample");
  const auto spec = LocalClassSpec::simplicial();
  std::vector<char> hit(samples, 0);
  parallel_for(samples, [&](std::size_t t) {
    const auto s = sample_finite(n, spec, seed.child(static_cast<std::uint64_t>(t)));
    hit[t] = greedy_collapse(SimplicialComplex::from_structure(s)).collapsed_to_point;
  });
  ExperimentResult r;
  r.rows.push_back(make_row(n, samples, static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1)),
                            std::nullopt));
  return r;
}

}  // namespace rsc
