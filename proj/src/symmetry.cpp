#include "rsc/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "rsc/errors.hpp"
#include "rsc/parallel.hpp"

namespace rsc {

namespace {

// ---------------------------------------------------------------------------
// Colour refinement and backtracking over vertex positions.

struct Incidence {
  RelationId rel;
  int position;  // -1 for symmetric relations
  std::vector<int> others;
};

struct Indexed {
  const Structure* s;
  std::vector<std::vector<Incidence>> inc;

  explicit Indexed(const Structure& st) : s(&st), inc(st.size()) {
    const auto& u = st.universe();
    auto pos = [&](Vertex v) { return static_cast<int>(std::lower_bound(u.begin(), u.end(), v) - u.begin()); };
    for (const auto& [rel, tuples] : st.interpretations()) {
      const bool sym = st.signature().is_symmetric(rel);
      for (const auto& t : tuples) {
        for (std::size_t i = 0; i < t.size(); ++i) {
          Incidence e{rel, sym ? -1 : static_cast<int>(i), {}};
          for (std::size_t j = 0; j < t.size(); ++j) {
            if (j != i) e.others.push_back(pos(t[j]));
          }
          inc[static_cast<std::size_t>(pos(t[i]))].push_back(std::move(e));
        }
      }
    }
  }

  std::size_t size() const { return inc.size(); }
  Vertex label(int p) const { return s->universe()[static_cast<std::size_t>(p)]; }
};

using Colours = std::vector<int>;

std::size_t distinct(const std::vector<Colours*>& cs) {
  std::set<int> all;
  for (const auto* c : cs) all.insert(c->begin(), c->end());
  return all.size();
}

// Refines all colourings jointly with a shared, label-independent palette.
void refine(const std::vector<const Indexed*>& xs, const std::vector<Colours*>& cs) {
  using Entry = std::tuple<int, int, int, std::vector<int>>;
  using Signature = std::pair<int, std::vector<Entry>>;
  std::size_t classes = distinct(cs);
  while (true) {
    std::vector<std::vector<Signature>> sigs(xs.size());
    std::map<Signature, int> palette;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const Colours& c = *cs[k];
      for (std::size_t v = 0; v < xs[k]->size(); ++v) {
        Signature sig{c[v], {}};
        for (const auto& e : xs[k]->inc[v]) {
          std::vector<int> oc;
          for (int o : e.others) oc.push_back(c[static_cast<std::size_t>(o)]);
          if (e.position < 0) std::sort(oc.begin(), oc.end());
          sig.second.emplace_back(e.rel.arity, e.rel.index, e.position, std::move(oc));
        }
        std::sort(sig.second.begin(), sig.second.end());
        palette.emplace(sig, 0);
        sigs[k].push_back(std::move(sig));
      }
    }
    int next = 0;
    for (auto& [sig, id] : palette) id = next++;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      for (std::size_t v = 0; v < sigs[k].size(); ++v) (*cs[k])[v] = palette.at(sigs[k][v]);
    }
    const std::size_t now = distinct(cs);
    if (now == classes) return;
    classes = now;
  }
}

std::map<int, std::size_t> histogram(const Colours& c) {
  std::map<int, std::size_t> h;
  for (int x : c) ++h[x];
  return h;
}

bool same_shape(const Structure& a, const Structure& b) {
  if (a.size() != b.size() || !(a.signature() == b.signature())) return false;
  const auto& ia = a.interpretations();
  const auto& ib = b.interpretations();
  auto count = [](const std::map<RelationId, TupleSet>& m, RelationId r) {
    auto it = m.find(r);
    return it == m.end() ? std::size_t{0} : it->second.size();
  };
  for (const auto& [rel, ts] : ia) {
    if (ts.size() != count(ib, rel)) return false;
  }
  for (const auto& [rel, ts] : ib) {
    if (ts.size() != count(ia, rel)) return false;
  }
  return true;
}

// Finds a bijection A -> B respecting colours; colours must come from a joint
// refinement. Relations are checked incrementally in both directions.
std::optional<std::vector<int>> match(const Indexed& a, const Indexed& b, const Colours& ca,
                                      const Colours& cb) {
  const std::size_t n = a.size();
  if (histogram(ca) != histogram(cb)) return std::nullopt;
  const auto class_size = histogram(ca);

  // Order: most incidences to already ordered vertices, then smaller class.
  std::vector<int> order;
  std::vector<char> placed(n, 0);
  std::vector<std::size_t> links(n, 0);
  for (std::size_t step = 0; step < n; ++step) {
    int best = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (placed[v]) continue;
      if (best < 0) {
        best = static_cast<int>(v);
        continue;
      }
      const auto bv = static_cast<std::size_t>(best);
      const auto key = std::make_tuple(links[v], -static_cast<long>(class_size.at(ca[v])));
      const auto bkey = std::make_tuple(links[bv], -static_cast<long>(class_size.at(ca[bv])));
      if (key > bkey) best = static_cast<int>(v);
    }
    const auto bv = static_cast<std::size_t>(best);
    placed[bv] = 1;
    order.push_back(best);
    for (const auto& e : a.inc[bv]) {
      for (int o : e.others) ++links[static_cast<std::size_t>(o)];
    }
  }

  std::vector<int> fwd(n, -1), back(n, -1);
  std::vector<Vertex> buf;
  auto preserves = [&](int av, int bv) {
    for (const auto& e : a.inc[static_cast<std::size_t>(av)]) {
      bool ready = true;
      for (int o : e.others) ready = ready && fwd[static_cast<std::size_t>(o)] >= 0;
      if (!ready) continue;
      buf.clear();
      std::size_t k = 0;
      const std::size_t len = e.others.size() + 1;
      for (std::size_t i = 0; i < len; ++i) {
        if (static_cast<int>(i) == e.position || (e.position < 0 && i == 0)) {
          buf.push_back(b.label(bv));
        } else {
          buf.push_back(b.label(fwd[static_cast<std::size_t>(e.others[k++])]));
        }
      }
      if (!b.s->holds(e.rel, buf)) return false;
    }
    for (const auto& e : b.inc[static_cast<std::size_t>(bv)]) {
      bool ready = true;
      for (int o : e.others) ready = ready && back[static_cast<std::size_t>(o)] >= 0;
      if (!ready) continue;
      buf.clear();
      std::size_t k = 0;
      const std::size_t len = e.others.size() + 1;
      for (std::size_t i = 0; i < len; ++i) {
        if (static_cast<int>(i) == e.position || (e.position < 0 && i == 0)) {
          buf.push_back(a.label(av));
        } else {
          buf.push_back(a.label(back[static_cast<std::size_t>(e.others[k++])]));
        }
      }
      if (!a.s->holds(e.rel, buf)) return false;
    }
    return true;
  };

  std::function<bool(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) return true;
    const int av = order[i];
    for (std::size_t bv = 0; bv < n; ++bv) {
      if (back[bv] >= 0 || cb[bv] != ca[static_cast<std::size_t>(av)]) continue;
      fwd[static_cast<std::size_t>(av)] = static_cast<int>(bv);
      back[bv] = av;
      if (preserves(av, static_cast<int>(bv)) && rec(i + 1)) return true;
      fwd[static_cast<std::size_t>(av)] = -1;
      back[bv] = -1;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return fwd;
}

VertexMap to_vertex_map(const Indexed& a, const Indexed& b, const std::vector<int>& m) {
  VertexMap out;
  for (std::size_t i = 0; i < m.size(); ++i) out[a.label(static_cast<int>(i))] = b.label(m[i]);
  return out;
}

// Automorphism fixing `fixed` pointwise and sending v to t, if any.
std::optional<std::vector<int>> automorphism_with(const Indexed& x, const std::vector<int>& fixed,
                                                  int v, int t) {
  Colours ca(x.size(), 0), cb(x.size(), 0);
  for (std::size_t j = 0; j < fixed.size(); ++j) {
    ca[static_cast<std::size_t>(fixed[j])] = static_cast<int>(j) + 1;
    cb[static_cast<std::size_t>(fixed[j])] = static_cast<int>(j) + 1;
  }
  ca[static_cast<std::size_t>(v)] = static_cast<int>(fixed.size()) + 1;
  cb[static_cast<std::size_t>(t)] = static_cast<int>(fixed.size()) + 1;
  refine({&x, &x}, {&ca, &cb});
  return match(x, x, ca, cb);
}

}  // namespace

std::optional<VertexMap> isomorphic(const Structure& a, const Structure& b) {
  if (!same_shape(a, b)) return std::nullopt;
  const Indexed ia(a), ib(b);
  Colours ca(a.size(), 0), cb(b.size(), 0);
  refine({&ia, &ib}, {&ca, &cb});
  auto m = match(ia, ib, ca, cb);
  if (!m) return std::nullopt;
  return to_vertex_map(ia, ib, *m);
}

AutomorphismGroup automorphism_group(const Structure& s) {
  const Indexed x(s);
  AutomorphismGroup g;
  std::vector<int> base;
  while (true) {
    Colours c(x.size(), 0);
    for (std::size_t j = 0; j < base.size(); ++j) c[static_cast<std::size_t>(base[j])] = static_cast<int>(j) + 1;
    refine({&x}, {&c});
    const auto hist = histogram(c);
    int v = -1;
    for (std::size_t i = 0; i < x.size() && v < 0; ++i) {
      if (hist.at(c[i]) > 1) v = static_cast<int>(i);
    }
    if (v < 0) break;

    std::vector<std::vector<int>> level;
    std::set<int> orbit{v};
    for (std::size_t t = 0; t < x.size(); ++t) {
      const int ti = static_cast<int>(t);
      if (c[t] != c[static_cast<std::size_t>(v)] || orbit.count(ti)) continue;
      auto aut = automorphism_with(x, base, v, ti);
      if (!aut) continue;
      g.generators.push_back(to_vertex_map(x, x, *aut));
      level.push_back(std::move(*aut));
      std::vector<int> frontier(orbit.begin(), orbit.end());
      while (!frontier.empty()) {
        const int u = frontier.back();
        frontier.pop_back();
        for (const auto& p : level) {
          if (orbit.insert(p[static_cast<std::size_t>(u)]).second) frontier.push_back(p[static_cast<std::size_t>(u)]);
        }
      }
    }
    g.order *= orbit.size();
    base.push_back(v);
  }
  return g;
}

bool is_rigid(const Structure& s) {
  const Structure frame = k_frame(s, 2);
  const Indexed x(frame);
  Colours c(x.size(), 0);
  refine({&x}, {&c});
  if (distinct({&c}) == x.size()) return true;
  if (automorphism_group(frame).order == 1) return true;
  return automorphism_group(s).order == 1;
}

ExperimentResult rigidity_experiment(const std::vector<std::size_t>& ns, std::size_t trials,
                                     const Seed& seed) {
  if (trials < 100) throw InvalidArgument("rigidity experiments need at least 100 trials");
  const auto spec = LocalClassSpec::simplicial();
  ExperimentResult result;
  for (std::size_t n : ns) {
    std::vector<char> rigid(trials, 0);
    const Seed level = seed.child(static_cast<std::uint64_t>(n));
    parallel_for(trials, [&](std::size_t t) {
      rigid[t] = is_rigid(sample_finite(n, spec, level.child(static_cast<std::uint64_t>(t))));
    });
    result.rows.push_back(
        make_row(n, trials, static_cast<std::size_t>(std::count(rigid.begin(), rigid.end(), 1)), 1.0));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Finite groups.

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table, std::vector<std::string> labels) {
  const std::size_t n = table.size();
  if (n == 0) throw InvalidGroup("group table is empty");
  for (const auto& row : table) {
    if (row.size() != n) throw InvalidGroup("group table is not square");
    for (int x : row) {
      if (x < 0 || static_cast<std::size_t>(x) >= n) throw InvalidGroup("group table entry out of range");
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (table[0][a] != static_cast<int>(a) || table[a][0] != static_cast<int>(a)) {
      throw InvalidGroup("element 0 is not the identity");
    }
  }
  FiniteGroup g;
  g.inverse_.assign(n, -1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (table[a][b] == 0 && table[b][a] == 0) g.inverse_[a] = static_cast<int>(b);
    }
    if (g.inverse_[a] < 0) throw InvalidGroup("element " + std::to_string(a) + " has no inverse");
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (table[static_cast<std::size_t>(table[a][b])][c] != table[a][static_cast<std::size_t>(table[b][c])]) {
          throw InvalidGroup("group table is not associative");
        }
      }
    }
  }
  if (!labels.empty() && labels.size() != n) throw InvalidGroup("label count differs from group order");
  g.table_ = std::move(table);
  g.labels_ = std::move(labels);
  return g;
}

FiniteGroup FiniteGroup::trivial() { return cyclic(1); }

FiniteGroup FiniteGroup::cyclic(int n) {
  if (n < 1) throw InvalidArgument("cyclic group order must be positive");
  std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a) {
    labels.push_back(std::to_string(a));
    for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
  }
  return from_table(std::move(t), std::move(labels));
}

FiniteGroup FiniteGroup::symmetric(int k) {
  if (k < 1 || k > 6) throw InvalidArgument("symmetric groups are supported for 1 <= k <= 6");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<int>, int> index;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    index[perms[i]] = static_cast<int>(i);
    std::string s = "[";
    for (std::size_t j = 0; j < perms[i].size(); ++j) s += (j ? "," : "") + std::to_string(perms[i][j]);
    labels.push_back(s + "]");
  }
  std::vector<std::vector<int>> t(perms.size(), std::vector<int>(perms.size()));
  for (std::size_t a = 0; a < perms.size(); ++a) {
    for (std::size_t b = 0; b < perms.size(); ++b) {
      std::vector<int> c(static_cast<std::size_t>(k));
      for (std::size_t x = 0; x < c.size(); ++x) c[x] = perms[a][static_cast<std::size_t>(perms[b][x])];
      t[a][b] = index.at(c);
    }
  }
  return from_table(std::move(t), std::move(labels));
}

std::string FiniteGroup::label(int a) const {
  return labels_.empty() ? std::to_string(a) : labels_.at(static_cast<std::size_t>(a));
}

Json group_to_json(const FiniteGroup& g) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["order"] = g.order();
  j["table"] = g.table();
  if (!g.labels().empty()) j["labels"] = g.labels();
  return j;
}

FiniteGroup group_from_json(const Json& j) {
  try {
    if (j.contains("cyclic")) return FiniteGroup::cyclic(j.at("cyclic").get<int>());
    if (j.contains("symmetric")) return FiniteGroup::symmetric(j.at("symmetric").get<int>());
    if (!j.contains("table")) throw ConfigError("group JSON needs \"table\", \"cyclic\" or \"symmetric\"");
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return FiniteGroup::from_table(j.at("table").get<std::vector<std::vector<int>>>(), std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed group JSON: ") + e.what());
  }
}

void validate_inclusion(const FiniteGroup& h, const FiniteGroup& g, const std::vector<int>& incl) {
  if (incl.size() != static_cast<std::size_t>(h.order())) throw InvalidGroup("inclusion has the wrong length");
  std::set<int> seen;
  for (int x : incl) {
    if (x < 0 || x >= g.order()) throw InvalidGroup("inclusion image out of range");
    if (!seen.insert(x).second) throw InvalidGroup("inclusion is not injective");
  }
  for (int a = 0; a < h.order(); ++a) {
    for (int b = 0; b < h.order(); ++b) {
      if (incl[static_cast<std::size_t>(h.mul(a, b))] !=
          g.mul(incl[static_cast<std::size_t>(a)], incl[static_cast<std::size_t>(b)])) {
        throw InvalidGroup("inclusion is not a homomorphism");
      }
    }
  }
}

std::vector<int> cyclic_inclusion(int m, int n) {
  if (m < 1 || n < 1 || n % m != 0) throw InvalidGroup("Z/m embeds in Z/n only when m divides n");
  std::vector<int> out;
  for (int k = 0; k < m; ++k) out.push_back(k * (n / m));
  return out;
}

std::vector<int> symmetric_inclusion(int j, int k) {
  if (j < 1 || j > k) throw InvalidGroup("S_j embeds in S_k only when j <= k");
  const FiniteGroup small = FiniteGroup::symmetric(j);
  const FiniteGroup big = FiniteGroup::symmetric(k);
  std::map<std::string, int> index;
  for (int i = 0; i < big.order(); ++i) index[big.label(i)] = i;
  std::vector<int> out;
  for (int i = 0; i < small.order(); ++i) {
    std::string l = small.label(i);
    l.pop_back();
    for (int x = j; x < k; ++x) l += "," + std::to_string(x);
    out.push_back(index.at(l + "]"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partial actions.

PartialAction empty_action(const FiniteGroup& g) {
  return {g, {}, std::vector<VertexMap>(static_cast<std::size_t>(g.order()))};
}

PartialAction make_action(const FiniteGroup& g, VertexSet domain, std::vector<VertexMap> perms) {
  PartialAction a{g, make_vertex_set(std::move(domain)), std::move(perms)};
  if (a.perms.size() != static_cast<std::size_t>(g.order())) {
    throw InvalidAction("need one permutation per group element");
  }
  return a;
}

void validate_action(const PartialAction& act, const Structure& ambient) {
  const FiniteGroup& g = act.group;
  if (act.perms.size() != static_cast<std::size_t>(g.order())) {
    throw InvalidAction("need one permutation per group element");
  }
  for (int a = 0; a < g.order(); ++a) {
    const auto& p = act.perms[static_cast<std::size_t>(a)];
    std::vector<Vertex> keys, values;
    for (const auto& [x, y] : p) {
      keys.push_back(x);
      values.push_back(y);
    }
    std::sort(values.begin(), values.end());
    if (keys != act.domain || values != act.domain) {
      throw InvalidAction("element " + g.label(a) + " is not a bijection of the domain");
    }
  }
  for (Vertex x : act.domain) {
    if (act.act(0, x) != x) throw InvalidAction("the identity moves vertex " + std::to_string(x));
  }
  for (int a = 0; a < g.order(); ++a) {
    for (int b = 0; b < g.order(); ++b) {
      for (Vertex x : act.domain) {
        if (act.act(g.mul(a, b), x) != act.act(a, act.act(b, x))) {
          throw InvalidAction("composition fails for " + g.label(a) + " * " + g.label(b));
        }
      }
    }
  }
  const Structure on = induced_substructure(ambient, act.domain);
  for (int a = 0; a < g.order(); ++a) {
    if (!(relabel(on, act.perms[static_cast<std::size_t>(a)]) == on)) {
      throw InvalidAction("element " + g.label(a) + " is not an automorphism of the domain");
    }
  }
}

namespace {

// Abstract vertices 0..m-1 with a permutation per group element.
using AbstractPerms = std::vector<std::vector<Vertex>>;

// For custom classes: every orbit of subsets that `open` accepts takes the
// first admissible choice of its first member. Built-in kinds always admit
// the empty choice, which is what the sparse copies already leave in place.
void complete_orbits(Structure& t, const AbstractPerms& perms, const LocalClassSpec& spec,
                     const std::function<bool(const VertexSet&)>& open) {
  if (spec.kind() != ClassKind::Custom) return;
  const Signature& sig = spec.signature();
  const int top = std::min(*sig.max_arity(), static_cast<int>(t.size()));
  std::set<VertexSet> done;
  for (int m = sig.min_arity(); m <= top; ++m) {
    if (sig.relation_count(m) == 0) continue;
    for_each_subset_of_size(t.universe(), static_cast<std::size_t>(m), [&](const VertexSet& x) {
      if (!open(x) || done.count(x)) return;
      const Assignment a = admissible_assignments(spec, t, x).front();
      for (const auto& p : perms) {
        VertexSet y;
        for (Vertex u : x) y.push_back(p[u]);
        std::sort(y.begin(), y.end());
        if (done.insert(y).second) apply_assignment(t, slots_on(sig, y), a);
      }
    });
  }
}

void require_symmetric(const LocalClassSpec& spec) {
  if (!spec.signature().all_symmetric()) {
    throw InvalidArgument("group actions are implemented for symmetric signatures only");
  }
}

// Places every abstract vertex missing from `emb`, in increasing order.
void realize(LazyLimit& l, const Structure& pattern, VertexMap& emb) {
  VertexSet placed;
  for (const auto& [x, y] : emb) placed.push_back(x);
  for (Vertex x : pattern.universe()) {
    if (emb.count(x)) continue;
    VertexSet with = placed;
    with.insert(std::upper_bound(with.begin(), with.end(), x), x);
    const Structure b = induced_substructure(pattern, with);
    emb[x] = find_witness(l, emb, b).vertex;
    placed = std::move(with);
  }
}

std::size_t index_in(const VertexSet& s, Vertex v) {
  return static_cast<std::size_t>(std::lower_bound(s.begin(), s.end(), v) - s.begin());
}

}  // namespace

PartialAction extend_action(LazyLimit& l, const PartialAction& act, Vertex v) {
  const LocalClassSpec& spec = l.spec();
  require_symmetric(spec);
  validate_action(act, l.induced(act.domain));
  if (std::binary_search(act.domain.begin(), act.domain.end(), v)) {
    throw InvalidArgument("the new vertex already lies in the domain");
  }
  const FiniteGroup& h = act.group;
  const VertexSet& s = act.domain;
  const std::size_t k = s.size();
  const auto order = static_cast<std::size_t>(h.order());
  const Vertex total = static_cast<Vertex>(k + order);
  auto new_vertex = [&](int g) { return static_cast<Vertex>(k + static_cast<std::size_t>(g)); };

  Structure pattern(spec.signature_ptr(), range_set(total));
  const Structure on_s = l.induced(s);
  for (const auto& [rel, tuples] : on_s.interpretations()) {
    for (const auto& t : tuples) {
      Tuple u;
      for (Vertex x : t) u.push_back(static_cast<Vertex>(index_in(s, x)));
      pattern.add(rel, u);
    }
  }
  VertexSet around = s;
  around.insert(std::upper_bound(around.begin(), around.end(), v), v);
  const Structure near = l.induced(around);
  for (const auto& [rel, tuples] : near.interpretations()) {
    for (const auto& t : tuples) {
      if (std::find(t.begin(), t.end(), v) == t.end()) continue;
      for (int g = 0; g < h.order(); ++g) {
        Tuple u;
        for (Vertex x : t) {
          u.push_back(x == v ? new_vertex(g) : static_cast<Vertex>(index_in(s, act.act(g, x))));
        }
        pattern.add(rel, u);
      }
    }
  }
  AbstractPerms perms(order, std::vector<Vertex>(total));
  for (int g = 0; g < h.order(); ++g) {
    for (std::size_t i = 0; i < k; ++i) perms[static_cast<std::size_t>(g)][i] = static_cast<Vertex>(index_in(s, act.act(g, s[i])));
    for (int b = 0; b < h.order(); ++b) perms[static_cast<std::size_t>(g)][new_vertex(b)] = new_vertex(h.mul(g, b));
  }
  complete_orbits(pattern, perms, spec, [&](const VertexSet& x) {
    return std::count_if(x.begin(), x.end(), [&](Vertex u) { return u >= k; }) >= 2;
  });
  require_member(pattern, spec, "equivariant completion");

  VertexMap emb;
  for (std::size_t i = 0; i < k; ++i) emb[static_cast<Vertex>(i)] = s[i];
  emb[new_vertex(0)] = v;
  realize(l, pattern, emb);

  PartialAction out;
  out.group = h;
  for (const auto& [x, y] : emb) out.domain.push_back(y);
  std::sort(out.domain.begin(), out.domain.end());
  out.perms.resize(order);
  for (int g = 0; g < h.order(); ++g) {
    for (Vertex x = 0; x < total; ++x) out.perms[static_cast<std::size_t>(g)][emb.at(x)] = emb.at(perms[static_cast<std::size_t>(g)][x]);
  }
  return out;
}

PartialAction induce_action(const FiniteGroup& g, const std::vector<int>& incl,
                            const PartialAction& act, LazyLimit& l) {
  const LocalClassSpec& spec = l.spec();
  require_symmetric(spec);
  const FiniteGroup& h = act.group;
  validate_inclusion(h, g, incl);
  validate_action(act, l.induced(act.domain));
  for (Vertex x : act.domain) {
    for (int a = 1; a < h.order(); ++a) {
      if (act.act(a, x) == x) throw NotFree("vertex " + std::to_string(x) + " is fixed by " + h.label(a));
    }
  }

  // Orbit representatives and coordinates x = a . rep_i.
  std::vector<Vertex> reps;
  std::map<Vertex, std::pair<int, std::size_t>> coord;
  for (Vertex x : act.domain) {
    if (coord.count(x)) continue;
    for (int a = 0; a < h.order(); ++a) coord[act.act(a, x)] = {a, reps.size()};
    reps.push_back(x);
  }
  const std::size_t n = reps.size();
  const auto go = static_cast<std::size_t>(g.order());
  const Vertex total = static_cast<Vertex>(go * n);
  auto abstract = [&](int elem, std::size_t i) { return static_cast<Vertex>(static_cast<std::size_t>(elem) * n + i); };

  std::vector<int> preimage(go, -1);
  for (int a = 0; a < h.order(); ++a) preimage[static_cast<std::size_t>(incl[static_cast<std::size_t>(a)])] = a;
  std::set<int> coset_reps;
  std::vector<int> coset_of(go);
  for (int x = 0; x < g.order(); ++x) {
    int rep = x;
    for (int a : incl) rep = std::min(rep, g.mul(x, a));
    coset_reps.insert(rep);
    coset_of[static_cast<std::size_t>(x)] = rep;
  }

  Structure pattern(spec.signature_ptr(), range_set(total));
  const Structure on_domain = l.induced(act.domain);
  for (const auto& [rel, tuples] : on_domain.interpretations()) {
    for (const auto& t : tuples) {
      for (int c : coset_reps) {
        Tuple u;
        for (Vertex x : t) {
          const auto [a, i] = coord.at(x);
          u.push_back(abstract(g.mul(c, incl[static_cast<std::size_t>(a)]), i));
        }
        pattern.add(rel, u);
      }
    }
  }
  AbstractPerms perms(go, std::vector<Vertex>(total));
  for (int a = 0; a < g.order(); ++a) {
    for (int b = 0; b < g.order(); ++b) {
      for (std::size_t i = 0; i < n; ++i) perms[static_cast<std::size_t>(a)][abstract(b, i)] = abstract(g.mul(a, b), i);
    }
  }
  complete_orbits(pattern, perms, spec, [&](const VertexSet& x) {
    std::set<int> cosets;
    for (Vertex u : x) cosets.insert(coset_of[u / n]);
    return cosets.size() >= 2;
  });
  require_member(pattern, spec, "induced equivariant structure");

  VertexMap emb;
  for (int b = 0; b < g.order(); ++b) {
    const int a = preimage[static_cast<std::size_t>(b)];
    if (a < 0) continue;
    for (std::size_t i = 0; i < n; ++i) emb[abstract(b, i)] = act.act(a, reps[i]);
  }
  realize(l, pattern, emb);

  PartialAction out;
  out.group = g;
  for (const auto& [x, y] : emb) out.domain.push_back(y);
  std::sort(out.domain.begin(), out.domain.end());
  out.perms.resize(go);
  for (int a = 0; a < g.order(); ++a) {
    for (Vertex x = 0; x < total; ++x) out.perms[static_cast<std::size_t>(a)][emb.at(x)] = emb.at(perms[static_cast<std::size_t>(a)][x]);
  }
  return out;
}

std::vector<PartialAction> direct_limit_action(const std::vector<FiniteGroup>& groups,
                                               const std::vector<std::vector<int>>& inclusions,
                                               std::size_t steps, LazyLimit& l) {
  if (steps == 0 || steps > groups.size()) throw InvalidArgument("steps must be between 1 and the chain length");
  if (inclusions.size() + 1 < steps) throw InvalidArgument("missing inclusion data for the chain");
  auto least_unused = [](const VertexSet& d) {
    Vertex v = 0;
    while (std::binary_search(d.begin(), d.end(), v)) ++v;
    return v;
  };
  std::vector<PartialAction> out;
  out.push_back(extend_action(l, empty_action(groups[0]), 0));
  for (std::size_t i = 1; i < steps; ++i) {
    const PartialAction up = induce_action(groups[i], inclusions[i - 1], out.back(), l);
    out.push_back(extend_action(l, up, least_unused(up.domain)));
  }
  return out;
}

ActionAudit audit_action(LazyLimit& l, const PartialAction& before, const PartialAction& after,
                         const std::vector<int>& incl) {
  ActionAudit audit;
  for (int a = 0; a < before.group.order(); ++a) {
    for (Vertex x : before.domain) {
      const auto& p = after.perms.at(static_cast<std::size_t>(incl.at(static_cast<std::size_t>(a))));
      auto it = p.find(x);
      if (it == p.end() || it->second != before.act(a, x)) {
        audit.restriction = false;
        audit.problems.push_back("restriction differs at element " + before.group.label(a) + ", vertex " +
                                 std::to_string(x));
      }
    }
  }
  try {
    validate_action(after, l.induced(after.domain));
  } catch (const InvalidAction& e) {
    audit.action_axioms = false;
    audit.problems.push_back(e.what());
  }
  if (audit.action_axioms) {
    for (Vertex x : after.domain) {
      if (std::binary_search(before.domain.begin(), before.domain.end(), x)) continue;
      for (int a = 1; a < after.group.order(); ++a) {
        if (after.act(a, x) == x) {
          audit.free_off_base = false;
          audit.problems.push_back("vertex " + std::to_string(x) + " is fixed by " + after.group.label(a));
        }
      }
    }
    for (const auto& [face, value] : l.memo_snapshot()) {
      if (face.empty() || !is_subset(face, after.domain)) continue;
      for (int a = 0; a < after.group.order(); ++a) {
        VertexSet img;
        for (Vertex x : face) img.push_back(after.act(a, x));
        std::sort(img.begin(), img.end());
        ++audit.faces_checked;
        if (l.decide(img) != value) {
          audit.equivariant = false;
          audit.problems.push_back("decision on a subset differs from its translate by " + after.group.label(a));
        }
      }
    }
  }
  return audit;
}

Json action_to_json(const PartialAction& act) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["group_order"] = act.group.order();
  j["domain"] = act.domain;
  Json orbits = Json::array();
  std::set<Vertex> seen;
  for (Vertex x : act.domain) {
    if (seen.count(x)) continue;
    std::set<Vertex> orbit;
    for (int a = 0; a < act.group.order(); ++a) orbit.insert(act.act(a, x));
    seen.insert(orbit.begin(), orbit.end());
    orbits.push_back(std::vector<Vertex>(orbit.begin(), orbit.end()));
  }
  j["orbits"] = orbits;
  Json perms = Json::array();
  for (const auto& p : act.perms) {
    std::vector<Vertex> images;
    for (Vertex x : act.domain) images.push_back(p.at(x));
    perms.push_back(images);
  }
  j["permutations"] = perms;
  return j;
}

Json audit_to_json(const ActionAudit& audit) {
  return Json{{"ok", audit.ok()},
              {"restriction", audit.restriction},
              {"action_axioms", audit.action_axioms},
              {"free_off_base", audit.free_off_base},
              {"equivariant", audit.equivariant},
              {"faces_checked", audit.faces_checked},
              {"problems", audit.problems}};
}

}  // namespace rsc
