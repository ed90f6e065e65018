// Acceptance checks. Prints one PASS/FAIL line per criterion; the exit status
// is nonzero if any selected criterion fails. Usage: acceptance [1..8 ...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "rsc/errors.hpp"
#include "rsc/geometry.hpp"
#include "rsc/logic.hpp"
#include "rsc/measure.hpp"
#include "rsc/sampler.hpp"
#include "rsc/symmetry.hpp"

using namespace rsc;

namespace {

// Pinned tolerances and budgets.
constexpr double kLimit1Seconds = 60;
constexpr double kLimit2Seconds = 60;
constexpr double kLimit3Seconds = 30;
constexpr double kLimit4Seconds = 300;
constexpr double kLimit5Seconds = 120;
constexpr double kLimit6Seconds = 120;
constexpr double kLimit7Seconds = 180;
constexpr double kLimit8Seconds = 60;

constexpr std::size_t kSamplerTrials = 100000;
constexpr double kSamplerSigmas = 4.0;

constexpr std::size_t kZeroOneTrials = 2000;
constexpr double kZeroOneMinAtLargest = 0.9;
constexpr double kZeroOneMaxNegatedAtLargest = 0.1;

constexpr std::size_t kRigidityN = 30;
constexpr std::size_t kRigidityTrials = 1000;
constexpr double kRigidityMin = 0.99;

constexpr std::size_t kActionSeeds = 20;
constexpr std::size_t kActionCap = 10000;

constexpr std::size_t kRealizeStages = 4;
constexpr std::size_t kRealizeSeeds = 10;
constexpr std::size_t kRealizeCap = 1000000;
constexpr std::size_t kRealizeSamples = 10000;
constexpr double kVolumeTolerance = 1e-9;

constexpr std::size_t kProbeN = 12;
constexpr std::size_t kProbeSamples = 500;

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = false;
  std::string detail;
};

LocalClassSpec spec_for(ClassKind kind) {
  switch (kind) {
    case ClassKind::Hypergraph:
      return LocalClassSpec::hypergraph();
    case ClassKind::SpernerFamily:
      return LocalClassSpec::sperner();
    default:
      return LocalClassSpec::simplicial();
  }
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Brute-force measure of the base set at `level`: product of reciprocal
// global frame counts over the lower levels.
Rational brute_mu(const oracle::FrameCounter& counter, oracle::Family fam, int level) {
  Rational mu = 1;
  for (int k = 0; k < level; ++k) mu /= counter.count(fam, k);
  return mu;
}

Outcome criterion1() {
  std::size_t checked = 0;
  std::vector<std::string> problems;
  for (auto kind : {ClassKind::SimplicialComplex, ClassKind::Hypergraph, ClassKind::SpernerFamily}) {
    const auto spec = spec_for(kind);
    const unsigned nmax = kind == ClassKind::SimplicialComplex ? 5 : 4;
    for (unsigned n = 0; n <= nmax; ++n) {
      oracle::FrameCounter counter(kind, n);
      Rational total = 0;
      std::set<oracle::Family> seen;
      for (const auto& [s, mu] : exact_distribution(n, spec)) {
        const auto fam = oracle::to_family(s);
        seen.insert(fam);
        total += mu;
        if (mu != brute_mu(counter, fam, static_cast<int>(n))) {
          problems.push_back(std::string(to_string(kind)) + " singleton measure differs at n=" + std::to_string(n));
        }
      }
      if (total != 1) problems.push_back(std::string(to_string(kind)) + " total != 1 at n=" + std::to_string(n));
      if (seen.size() != counter.members().size()) {
        problems.push_back(std::string(to_string(kind)) + " member count differs at n=" + std::to_string(n));
      }
      for (auto fam : counter.members()) {
        const auto s = oracle::to_structure(fam, n, spec);
        for (int level = 0; level <= static_cast<int>(n); ++level) {
          for (const std::optional<std::size_t> ambient : {std::optional<std::size_t>{}, std::optional<std::size_t>{n + 2}}) {
            ++checked;
            if (mu_base(BaseSet{s, level, ambient}, spec) != brute_mu(counter, fam, level)) {
              problems.push_back(std::string(to_string(kind)) + " mu_base differs at n=" + std::to_string(n));
            }
          }
        }
      }
    }
  }
  return {problems.empty(), std::to_string(checked) + " base sets exact" +
                                (problems.empty() ? "" : "; first problem: " + problems.front())};
}

Outcome criterion2() {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  for (auto kind : {ClassKind::SimplicialComplex, ClassKind::SpernerFamily, ClassKind::Hypergraph}) {
    const auto spec = spec_for(kind);
    // Hypergraphs on five vertices have 2^31 candidate families.
    const unsigned nmax = kind == ClassKind::Hypergraph ? 4 : 5;
    std::vector<oracle::FrameCounter> local;
    for (unsigned m = 0; m <= nmax; ++m) local.emplace_back(kind, m);
    for (unsigned n = 1; n <= nmax; ++n) {
      const auto& counter = local[n];
      for (auto fam : counter.members()) {
        const auto s = oracle::to_structure(fam, n, spec);
        for (int k = 0; k <= static_cast<int>(n); ++k) {
          // Right side: product over the (k+1)-subsets of the global count there.
          BigInt product = 1;
          for (unsigned sub = 0; sub < (1u << n); ++sub) {
            if (oracle::popcount(sub) != k + 1) continue;
            product *= local[static_cast<unsigned>(k + 1)].count(oracle::restrict(fam, n, sub), k);
          }
          const BigInt lhs = counter.count(fam, k);
          ++checked;
          if (lhs != product || count_frame_extensions(s, k, spec) != lhs) ++mismatches;
        }
      }
    }
  }
  return {mismatches == 0, std::to_string(checked) + " (member, k) pairs, " + std::to_string(mismatches) +
                               " mismatches (hypergraphs up to 4 vertices)"};
}

Outcome criterion3() {
  const auto spec = LocalClassSpec::simplicial();
  const unsigned n = 3;
  oracle::FrameCounter counter(ClassKind::SimplicialComplex, n);
  const auto drawn = sample_trials(SampleConfig{n, kSamplerTrials, Seed(kSeed)}, spec);
  std::map<oracle::Family, std::size_t> freq;
  for (const auto& s : drawn) ++freq[oracle::to_family(s)];
  double worst = 0;
  bool ok = true;
  Rational filled_mu = 0;
  std::size_t filled_count = 0;
  const oracle::Family filled = oracle::to_family(SimplicialComplex::from_facets({0, 1, 2}, {{0, 1, 2}}).to_structure());
  for (auto fam : counter.members()) {
    const Rational mu = brute_mu(counter, fam, static_cast<int>(n));
    const double p = mu.convert_to<double>();
    const double est = static_cast<double>(freq[fam]) / kSamplerTrials;
    const double sigma = std::sqrt(p * (1 - p) / kSamplerTrials);
    const double z = std::abs(est - p) / sigma;
    worst = std::max(worst, z);
    if (z > kSamplerSigmas) ok = false;
    if (fam == filled) {
      filled_mu = mu;
      filled_count = freq[fam];
    }
  }
  std::size_t outside = 0;
  for (const auto& [fam, c] : freq) outside += oracle::member(ClassKind::SimplicialComplex, n, fam) ? 0 : c;
  ok = ok && outside == 0 && filled_mu == Rational(1, 16);
  return {ok, std::to_string(counter.members().size()) + " complexes, max |z| = " + fmt("%.2f", worst) +
                  ", filled triangle " + fmt("%.5f", static_cast<double>(filled_count) / kSamplerTrials) +
                  " vs exact " + filled_mu.str()};
}

Outcome criterion4() {
  const auto spec = LocalClassSpec::simplicial();
  const auto b = SimplicialComplex::from_facets({0, 1, 2}, {{0, 1, 2}}).to_structure();
  const auto ax = make_axiom(b, 2, spec);
  const std::vector<std::size_t> ns{8, 16, 32, 64};
  const auto pos = zero_one_experiment(ax, ns, kZeroOneTrials, Seed(kSeed), spec);
  const auto neg = zero_one_experiment(ax, ns, kZeroOneTrials, Seed(kSeed), spec, true);
  bool monotone = true;
  std::string ests;
  for (std::size_t i = 0; i < pos.rows.size(); ++i) {
    ests += (i ? " " : "") + fmt("%.3f", pos.rows[i].estimate);
    if (i > 0 && pos.rows[i].estimate < pos.rows[i - 1].estimate &&
        pos.rows[i].ci_hi < pos.rows[i - 1].ci_lo) {
      monotone = false;
    }
  }
  const double last = pos.rows.back().estimate;
  const double last_neg = neg.rows.back().estimate;
  const bool ok = monotone && last >= kZeroOneMinAtLargest && last_neg <= kZeroOneMaxNegatedAtLargest;
  return {ok, "estimates at N=8,16,32,64: " + ests + (monotone ? " (nondecreasing within CIs)" : " (decreasing)") +
                  "; N=64 " + fmt("%.3f", last) + " (need >= 0.9), negated " + fmt("%.3f", last_neg) +
                  " (need <= 0.1)"};
}

Outcome criterion5() {
  const auto r = rigidity_experiment({kRigidityN}, kRigidityTrials, Seed(kSeed));
  const auto& row = r.rows.front();
  return {row.estimate >= kRigidityMin, std::to_string(row.satisfied) + "/" + std::to_string(row.trials) +
                                            " rigid at N=30 (" + fmt("%.4f", row.estimate) + ", need >= 0.99)"};
}

std::vector<int> identity_incl(const FiniteGroup& g) {
  std::vector<int> out(static_cast<std::size_t>(g.order()));
  for (int a = 0; a < g.order(); ++a) out[static_cast<std::size_t>(a)] = a;
  return out;
}

Vertex least_unused(const VertexSet& d) {
  Vertex v = 0;
  while (std::binary_search(d.begin(), d.end(), v)) ++v;
  return v;
}

// The action of `g` on the pair {a, b} in which element x swaps the pair iff swaps(x).
PartialAction pair_action(const FiniteGroup& g, Vertex a, Vertex b, const std::function<bool(int)>& swaps) {
  std::vector<VertexMap> perms;
  for (int x = 0; x < g.order(); ++x) {
    perms.push_back(swaps(x) ? VertexMap{{a, b}, {b, a}} : VertexMap{{a, a}, {b, b}});
  }
  return make_action(g, {a, b}, perms);
}

Outcome criterion6() {
  std::size_t audits = 0, failed = 0, witness_failures = 0, faces = 0;
  std::string first_problem;
  auto note = [&](const std::string& what) {
    if (first_problem.empty()) first_problem = what;
  };
  auto audit = [&](LazyLimit& l, const PartialAction& before, const PartialAction& after,
                   const std::vector<int>& incl, const std::string& label) {
    ++audits;
    const auto a = audit_action(l, before, after, incl);
    faces += a.faces_checked;
    if (!a.ok()) {
      ++failed;
      note(label + ": " + (a.problems.empty() ? "audit failed" : a.problems.front()));
    }
  };
  const auto z2 = FiniteGroup::cyclic(2), z4 = FiniteGroup::cyclic(4), s3 = FiniteGroup::symmetric(3);
  for (std::uint64_t seed = 0; seed < kActionSeeds; ++seed) {
    const std::string tag = "seed " + std::to_string(seed);
    try {
      {
        // Z/2 swapping an adjacent pair, extended by a fresh vertex.
        LazyLimit l(LocalClassSpec::simplicial(), Seed(seed), kActionCap);
        Vertex a = 0, b = 1;
        while (!l.is_face({a, b})) ++b;
        const auto base = pair_action(z2, a, b, [](int x) { return x == 1; });
        const auto ext = extend_action(l, base, least_unused(base.domain));
        audit(l, base, ext, identity_incl(z2), tag + " Z/2");
      }
      {
        // Z/4 acting on the pair through its quotient Z/2.
        LazyLimit l(LocalClassSpec::simplicial(), Seed(seed), kActionCap);
        const auto base = pair_action(z4, 0, 1, [](int x) { return x % 2 == 1; });
        const auto ext = extend_action(l, base, least_unused(base.domain));
        audit(l, base, ext, identity_incl(z4), tag + " Z/4");
      }
      {
        // S_3 from the empty domain: a free orbit through vertex 0.
        LazyLimit l(LocalClassSpec::simplicial(), Seed(seed), kActionCap);
        const auto base = empty_action(s3);
        const auto ext = extend_action(l, base, 0);
        audit(l, base, ext, identity_incl(s3), tag + " S_3");
      }
      {
        // Z/2 < Z/4 through the direct-limit steps.
        LazyLimit l(LocalClassSpec::simplicial(), Seed(seed), kActionCap);
        const auto incl = cyclic_inclusion(2, 4);
        const auto steps = direct_limit_action({z2, z4}, {incl}, 2, l);
        audit(l, empty_action(z2), steps[0], identity_incl(z2), tag + " Z/2 step");
        audit(l, steps[0], steps[1], incl, tag + " Z/2<Z/4");
      }
    } catch (const WitnessNotFound& e) {
      ++witness_failures;
      note(tag + ": " + e.what());
    }
  }
  const bool ok = failed == 0 && witness_failures == 0 && faces > 0;
  return {ok, std::to_string(audits) + " audits over " + std::to_string(kActionSeeds) + " seeds (" + std::to_string(faces) +
                  " memo entries checked), " +
                  std::to_string(failed) + " failed, " + std::to_string(witness_failures) + " WitnessNotFound" +
                  (first_problem.empty() ? "" : "; first: " + first_problem)};
}

Outcome criterion7() {
  std::size_t stages_ok = 0, stages_total = 0;
  double worst_volume = 0;
  std::size_t coverage_failures = 0;
  bool compatible = true;
  std::vector<std::string> failures;
  for (std::uint64_t seed = 0; seed < kRealizeSeeds; ++seed) {
    LazyLimit l(LocalClassSpec::simplicial(), Seed(seed), kRealizeCap);
    std::vector<ChainStage> chain;
    for (std::size_t k = 1; k <= kRealizeStages; ++k) {
      ++stages_total;
      try {
        chain = realize_chain(l, k);
      } catch (const WitnessNotFound& e) {
        failures.push_back("seed " + std::to_string(seed) + " stage " + std::to_string(k - 1) + ": witness p = 2^" +
                           fmt("%.1f", std::log2(e.success_probability())) + " not found in " +
                           std::to_string(e.candidates()) + " candidates");
        break;
      }
      const auto r = verify_chart(chain.back().chart, static_cast<int>(k - 1), kRealizeSamples, seed);
      worst_volume = std::max(worst_volume, r.volume_sum_error);
      coverage_failures += r.coverage_failures;
      const bool nested = k == 1 || restricts_to(chain.back().chart, chain[k - 2].chart);
      compatible = compatible && nested;
      if (r.volume_sum_error < kVolumeTolerance && r.coverage_failures == 0 && nested) ++stages_ok;
    }
  }
  const bool ok = failures.empty() && stages_ok == kRealizeSeeds * kRealizeStages && compatible;
  std::string detail = std::to_string(stages_ok) + "/" + std::to_string(kRealizeSeeds * kRealizeStages) +
                       " stages verified, max volume error " + fmt("%.1e", worst_volume) + ", coverage failures " +
                       std::to_string(coverage_failures) + ", charts " + (compatible ? "nested" : "NOT nested");
  if (!failures.empty()) {
    detail += "; " + std::to_string(failures.size()) + " seeds stopped, first: " + failures.front();
  }
  return {ok, detail};
}

Outcome criterion8() {
  auto collapses = [](std::vector<VertexSet> facets, Vertex n) {
    return greedy_collapse(SimplicialComplex::from_facets(range_set(n), facets)).collapsed_to_point;
  };
  const bool filled = collapses({{0, 1, 2}}, 3);
  const bool boundary = collapses({{0, 1}, {0, 2}, {1, 2}}, 3);
  const bool sphere = collapses({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}, 4);
  const bool tree = collapses({{0, 1}, {1, 2}, {1, 3}}, 4);
  const bool solid = collapses({{0, 1, 2, 3}}, 4);
  const bool two_points = collapses({}, 2);
  const bool fixtures = filled && !boundary && !sphere && tree && solid && !two_points;
  const auto a = to_csv(collapsibility_probe(kProbeN, kProbeSamples, Seed(kSeed)));
  const auto b = to_csv(collapsibility_probe(kProbeN, kProbeSamples, Seed(kSeed)));
  const auto row = collapsibility_probe(kProbeN, kProbeSamples, Seed(kSeed)).rows.front();
  const bool ok = fixtures && a == b && row.trials == kProbeSamples;
  return {ok, std::string("fixtures ") + (fixtures ? "exact" : "WRONG") + ", probe " + (a == b ? "deterministic" : "NOT deterministic") +
                  ", fraction collapsing to a point at N=12: " + fmt("%.4f", row.estimate)};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "exact measure oracle", kLimit1Seconds, criterion1},
    {2, "frame count product formula", kLimit2Seconds, criterion2},
    {3, "sampler fidelity at n=3", kLimit3Seconds, criterion3},
    {4, "zero-one law convergence", kLimit4Seconds, criterion4},
    {5, "rigidity at N=30", kLimit5Seconds, criterion5},
    {6, "group action audits", kLimit6Seconds, criterion6},
    {7, "PL realisation, 4 stages", kLimit7Seconds, criterion7},
    {8, "collapsibility probe", kLimit8Seconds, criterion8},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  bool all_pass = true;
  for (const auto& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    all_pass = all_pass && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << " ["
              << fmt("%.1f", secs) << " s, limit " << fmt("%.0f", c.limit_seconds) << " s"
              << (in_time ? "" : ", TOO SLOW") << "]" << std::endl;
  }
  return all_pass ? 0 : 1;
}
