#include "rsc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>
#include <sstream>

#include "rsc/errors.hpp"
#include "rsc/geometry.hpp"
#include "rsc/json_io.hpp"
#include "rsc/logic.hpp"
#include "rsc/measure.hpp"
#include "rsc/sampler.hpp"
#include "rsc/symmetry.hpp"

namespace rsc::cli {
namespace {

constexpr const char* kExperimentColumns =
    "CSV columns: N,trials,satisfied,estimate,ci_lo,ci_hi,limit. estimate is satisfied/trials, "
    "ci_lo and ci_hi bound the 95% Wilson interval, limit is the known limiting value or blank.";

constexpr const char* kStatsColumns =
    "With --stats, CSV columns: face,trials,count,estimate,exact_num,exact_den,exact,z. face lists "
    "the vertices separated by spaces, exact is the probability of the face under the exact measure "
    "and z is (estimate - exact) / sqrt(exact (1 - exact) / trials), 0 when exact is 0 or 1.";

Json big_to_json(const BigInt& x) {
  if (x >= 0 && x <= std::numeric_limits<std::uint64_t>::max()) return x.convert_to<std::uint64_t>();
  return x.str();
}

struct Output {
  std::ostream& out;
  std::string path;

  void emit(const std::string& text) const {
    if (path.empty()) {
      out << text;
    } else {
      write_text_file(path, text);
    }
  }
};

LoadedStructure load_structure(const std::string& path, bool require_valid = true) {
  return structure_from_json(read_json_file(path), require_valid);
}

// "face=0,1,2" -> {0,1,2}.
VertexSet parse_face(const std::string& stat) {
  const std::string prefix = "face=";
  if (stat.rfind(prefix, 0) != 0) throw ConfigError("--stats expects face=v,v,...; got '" + stat + "'");
  std::vector<Vertex> vs;
  std::stringstream ss(stat.substr(prefix.size()));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      vs.push_back(static_cast<Vertex>(v));
    } catch (const std::exception&) {
      throw ConfigError("bad vertex '" + tok + "' in --stats");
    }
  }
  if (vs.empty()) throw ConfigError("--stats face is empty");
  const VertexSet face = make_vertex_set(vs);
  if (face.size() != vs.size()) throw ConfigError("--stats face repeats a vertex");
  return face;
}

// Whether the set `face` is a face (simplicial) or an edge (hypergraph, Sperner) of s.
bool has_face(const Structure& s, const VertexSet& face, const LocalClassSpec& spec) {
  const auto rels = spec.signature().relations_of_arity(static_cast<int>(face.size()));
  if (rels.empty()) return spec.kind() == ClassKind::SimplicialComplex;
  return s.holds(rels.front(), face);
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string stats_csv(const std::vector<Structure>& samples, const std::vector<VertexSet>& faces,
                      const LocalClassSpec& spec) {
  std::string csv = "face,trials,count,estimate,exact_num,exact_den,exact,z\n";
  for (const auto& face : faces) {
    std::size_t count = 0;
    for (const auto& s : samples) count += has_face(s, face, spec) ? 1 : 0;
    // The measure restricted to a subset is the measure on that subset, so
    // the reference only needs the members on |face| vertices.
    Rational exact = 0;
    const VertexSet local = range_set(static_cast<Vertex>(face.size()));
    for (const auto& [member, mu] : exact_distribution(face.size(), spec)) {
      if (has_face(member, local, spec)) exact += mu;
    }
    const double trials = static_cast<double>(samples.size());
    const double est = trials > 0 ? static_cast<double>(count) / trials : 0.0;
    const double p = exact.convert_to<double>();
    const double z = (p > 0 && p < 1 && trials > 0) ? (est - p) / std::sqrt(p * (1 - p) / trials) : 0.0;
    std::string label;
    for (Vertex v : face) label += (label.empty() ? "" : " ") + std::to_string(v);
    csv += label + "," + std::to_string(samples.size()) + "," + std::to_string(count) + "," + fixed6(est) +
           "," + numerator(exact).str() + "," + denominator(exact).str() + "," + fixed6(p) + "," +
           fixed6(z) + "\n";
  }
  return csv;
}

// Group chain tokens: "trivial", "zN" (cyclic), "sN" (symmetric).
Json group_token(const std::string& tok) {
  if (tok == "trivial" || tok == "1") return Json{{"cyclic", 1}};
  if (tok.size() >= 2 && (tok[0] == 'z' || tok[0] == 's')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(tok.substr(1), &used);
      if (used == tok.size() - 1) return Json{{tok[0] == 'z' ? "cyclic" : "symmetric", n}};
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("unknown group '" + tok + "' in --chain (expected trivial, zN or sN)");
}

// Inclusion between two built-in descriptors; nullopt for table groups.
std::optional<std::vector<int>> auto_inclusion(const Json& h, const Json& g, const FiniteGroup& gh,
                                               const FiniteGroup& gg) {
  if (gh.order() == 1) return std::vector<int>{0};
  if (h.contains("cyclic") && g.contains("cyclic")) {
    return cyclic_inclusion(h.at("cyclic").get<int>(), g.at("cyclic").get<int>());
  }
  if (h.contains("symmetric") && g.contains("symmetric")) {
    return symmetric_inclusion(h.at("symmetric").get<int>(), g.at("symmetric").get<int>());
  }
  (void)gg;
  return std::nullopt;
}

struct Chain {
  std::vector<FiniteGroup> groups;
  std::vector<std::vector<int>> inclusions;
};

// A group file holds one group, or {"chain": [groups], "inclusions": [[...]]}.
Chain load_chain(const std::string& group_path, const std::vector<std::string>& tokens) {
  std::vector<Json> descriptors;
  std::vector<std::vector<int>> given;
  if (!group_path.empty()) {
    const Json j = read_json_file(group_path);
    if (j.contains("chain")) {
      try {
        for (const auto& g : j.at("chain")) descriptors.push_back(g);
        if (j.contains("inclusions")) given = j.at("inclusions").get<std::vector<std::vector<int>>>();
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed chain JSON: ") + e.what());
      }
    } else {
      descriptors.push_back(j);
    }
  }
  for (const auto& t : tokens) descriptors.push_back(group_token(t));
  if (descriptors.empty()) throw ConfigError("act needs --group or --chain");
  Chain c;
  for (const auto& d : descriptors) c.groups.push_back(group_from_json(d));
  for (std::size_t i = 0; i + 1 < c.groups.size(); ++i) {
    std::vector<int> incl;
    if (i < given.size()) {
      incl = given[i];
    } else if (auto a = auto_inclusion(descriptors[i], descriptors[i + 1], c.groups[i], c.groups[i + 1])) {
      incl = *a;
    } else {
      throw ConfigError("no inclusion given for chain link " + std::to_string(i));
    }
    validate_inclusion(c.groups[i], c.groups[i + 1], incl);
    c.inclusions.push_back(std::move(incl));
  }
  return c;
}

Json error_object(const Error& e) {
  Json j{{"error", e.code()}, {"message", e.what()}};
  if (const auto* w = dynamic_cast<const WitnessNotFound*>(&e)) {
    j["success_probability"] = w->success_probability();
    j["candidates"] = w->candidates();
    j["failure_bound"] = w->failure_bound();
  }
  return j;
}

void report_error(std::ostream& err, const Json& j) { err << j.dump() << "\n"; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random structures in local classes: exact measures, samplers, extension axioms, "
               "symmetry and piecewise-linear realisations.",
               "rsc"};
  app.set_config("--config", "", "TOML or INI file supplying any flag");
  app.require_subcommand(1);

  std::string in_path, out_path;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<std::size_t> ns;

  auto* validate_cmd = app.add_subcommand("validate", "Check a structure JSON against its class; "
                                                      "prints {valid, violations} and exits 1 if invalid");
  validate_cmd->add_option("--in", in_path, "structure JSON")->required();
  validate_cmd->add_option("-o,--out", out_path, "write the report here instead of stdout");

  int level = -1;
  auto* measure_cmd = app.add_subcommand(
      "measure", "Exact frame counts N(S,0..level-1) and the measure of the base set of S at `level`");
  measure_cmd->add_option("--in", in_path, "structure JSON")->required();
  measure_cmd->add_option("--level", level, "frame level (default: number of vertices)");
  measure_cmd->add_option("-o,--out", out_path, "output file");

  std::size_t n = 0;
  std::string class_name = "simplicial";
  std::vector<std::string> stats;
  auto* sample_cmd = app.add_subcommand(
      "sample", std::string("Sample class members on {0..n-1}; one structure JSON per line. ") + kStatsColumns);
  sample_cmd->add_option("--n", n, "number of vertices")->required();
  sample_cmd->add_option("--trials", trials, "number of samples")->required();
  sample_cmd->add_option("--seed", seed, "root seed")->required();
  sample_cmd->add_option("--class", class_name, "simplicial, hypergraph or sperner")
      ->check(CLI::IsMember({"simplicial", "hypergraph", "sperner"}));
  sample_cmd->add_option("--stats", stats, "face=v,v,... (repeatable): emit frequency CSV instead");
  sample_cmd->add_option("-o,--out", out_path, "output file");

  std::string axiom_path;
  bool negate = false;
  auto* zero_one_cmd = app.add_subcommand(
      "zero-one", std::string("Empirical satisfaction of an extension axiom. The axiom file is a structure "
                              "JSON for B with optional \"new_vertex\" (default: largest). ") +
                      kExperimentColumns);
  zero_one_cmd->add_option("--axiom", axiom_path, "axiom JSON")->required();
  zero_one_cmd->add_option("--Ns", ns, "sizes, comma separated")->required()->delimiter(',');
  zero_one_cmd->add_option("--trials", trials, "trials per size (>= 100)")->required();
  zero_one_cmd->add_option("--seed", seed, "root seed")->required();
  zero_one_cmd->add_flag("--negate", negate, "count samples violating the axiom");
  zero_one_cmd->add_option("-o,--out", out_path, "output file");

  auto* aut_cmd = app.add_subcommand(
      "aut", "Automorphism group order and generators; each generator lists the images of the vertices "
             "in increasing order");
  aut_cmd->add_option("--in", in_path, "structure JSON")->required();
  aut_cmd->add_option("-o,--out", out_path, "output file");

  auto* rigidity_cmd = app.add_subcommand(
      "rigidity", std::string("Fraction of rigid simplicial samples. ") + kExperimentColumns);
  rigidity_cmd->add_option("--Ns", ns, "sizes, comma separated")->required()->delimiter(',');
  rigidity_cmd->add_option("--trials", trials, "trials per size (>= 100)")->required();
  rigidity_cmd->add_option("--seed", seed, "root seed")->required();
  rigidity_cmd->add_option("-o,--out", out_path, "output file");

  std::string group_path;
  std::vector<std::string> chain_tokens;
  std::size_t steps = 0;
  std::size_t cap = kDefaultWitnessCap;
  auto* act_cmd = app.add_subcommand(
      "act", "Direct-limit group action inside a simplicial oracle: per step the orbits, permutations and "
             "an equivariance audit against the previous step");
  act_cmd->add_option("--group", group_path,
                      "group JSON ({\"cyclic\":n}, {\"symmetric\":k}, {\"table\":..}) or "
                      "{\"chain\":[..],\"inclusions\":[..]}");
  act_cmd->add_option("--chain", chain_tokens, "groups appended to the chain: trivial, zN, sN")->delimiter(',');
  act_cmd->add_option("--steps", steps, "number of steps (default: chain length)");
  act_cmd->add_option("--seed", seed, "oracle seed")->required();
  act_cmd->add_option("--cap", cap, "witness search budget per vertex");
  act_cmd->add_option("-o,--out", out_path, "output file");

  std::size_t samples = 10000;
  std::string format = "json";
  std::string out_dir = ".";
  std::size_t realize_cap = 1000000;
  auto* realize_cmd = app.add_subcommand(
      "realize", "Nested piecewise-linear charts of the oracle onto standard simplices, one stage per step, "
                 "each with its verification report");
  realize_cmd->add_option("--steps", steps, "number of stages")->required();
  realize_cmd->add_option("--seed", seed, "oracle seed")->required();
  realize_cmd->add_option("--samples", samples, "coverage samples per stage");
  realize_cmd->add_option("--cap", realize_cap, "witness search budget per fill vertex");
  realize_cmd->add_option("--format", format, "json, or off to also write stage_<i>.off")
      ->check(CLI::IsMember({"json", "off"}));
  realize_cmd->add_option("--out-dir", out_dir, "directory for OFF files");
  realize_cmd->add_option("-o,--out", out_path, "output file for the JSON");

  std::optional<std::size_t> probe_n;
  auto* collapse_cmd = app.add_subcommand(
      "collapse", std::string("Greedy elementary collapse of a simplicial complex (--in), or a probe over "
                              "random complexes (--probe-n, --samples, --seed). ") +
                      kExperimentColumns);
  collapse_cmd->add_option("--in", in_path, "simplicial complex JSON");
  collapse_cmd->add_option("--probe-n", probe_n, "probe: number of vertices");
  collapse_cmd->add_option("--samples", samples, "probe: number of samples");
  collapse_cmd->add_option("--seed", seed, "probe: root seed");
  collapse_cmd->add_option("-o,--out", out_path, "output file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, Json{{"error", "ConfigError"}, {"message", e.what()}});
    return 2;
  }

  const Output output{out, out_path};
  try {
    if (validate_cmd->parsed()) {
      const auto loaded = load_structure(in_path, false);
      const auto violations = validate(loaded.structure, loaded.spec);
      Json j{{"format_version", kFormatVersion},
             {"class", to_string(loaded.spec.kind())},
             {"valid", violations.empty()},
             {"violations", violations_to_json(violations)}};
      output.emit(j.dump(2) + "\n");
      if (!violations.empty()) {
        report_error(err, Json{{"error", "NotInClass"},
                               {"message", std::to_string(violations.size()) + " violated sentence instance(s)"}});
        return 1;
      }
    } else if (measure_cmd->parsed()) {
      const auto loaded = load_structure(in_path);
      if (level < 0) level = static_cast<int>(loaded.structure.size());
      Json counts = Json::array();
      for (const auto& c : frame_counts(loaded.structure, level, loaded.spec)) counts.push_back(big_to_json(c));
      const Rational mu = mu_base(BaseSet{loaded.structure, level, std::nullopt}, loaded.spec);
      Json j{{"format_version", kFormatVersion},
             {"level", level},
             {"N", counts},
             {"mu", {{"num", big_to_json(numerator(mu))}, {"den", big_to_json(denominator(mu))}}}};
      output.emit(j.dump() + "\n");
    } else if (sample_cmd->parsed()) {
      const ClassKind kind = class_kind_from_string(class_name);
      const LocalClassSpec spec = kind == ClassKind::Hypergraph      ? LocalClassSpec::hypergraph()
                                  : kind == ClassKind::SpernerFamily ? LocalClassSpec::sperner()
                                                                     : LocalClassSpec::simplicial();
      std::vector<VertexSet> faces;
      for (const auto& s : stats) {
        faces.push_back(parse_face(s));
        if (faces.back().back() >= n) throw ConfigError("--stats face uses a vertex outside {0..n-1}");
      }
      const auto drawn = sample_trials(SampleConfig{n, trials, Seed(seed)}, spec);
      if (faces.empty()) {
        std::string text;
        for (const auto& s : drawn) text += structure_to_json(s, kind).dump() + "\n";
        output.emit(text);
      } else {
        output.emit(stats_csv(drawn, faces, spec));
      }
    } else if (zero_one_cmd->parsed()) {
      const Json aj = read_json_file(axiom_path);
      const auto loaded = structure_from_json(aj);
      const ExtensionAxiom ax = aj.contains("new_vertex")
                                    ? make_axiom(loaded.structure, aj.at("new_vertex").get<Vertex>(), loaded.spec)
                                    : make_axiom(loaded.structure, loaded.spec);
      output.emit(to_csv(zero_one_experiment(ax, ns, trials, Seed(seed), loaded.spec, negate)));
    } else if (aut_cmd->parsed()) {
      const auto loaded = load_structure(in_path);
      const auto group = automorphism_group(loaded.structure);
      Json gens = Json::array();
      for (const auto& g : group.generators) {
        std::vector<Vertex> images;
        for (Vertex v : loaded.structure.universe()) images.push_back(g.at(v));
        gens.push_back(images);
      }
      Json j{{"format_version", kFormatVersion},
             {"vertices", loaded.structure.universe()},
             {"order", big_to_json(group.order)},
             {"generators", gens}};
      output.emit(j.dump() + "\n");
    } else if (rigidity_cmd->parsed()) {
      output.emit(to_csv(rigidity_experiment(ns, trials, Seed(seed))));
    } else if (act_cmd->parsed()) {
      const Chain chain = load_chain(group_path, chain_tokens);
      if (steps == 0) steps = chain.groups.size();
      LazyLimit l(LocalClassSpec::simplicial(), Seed(seed), cap);
      const auto actions = direct_limit_action(chain.groups, chain.inclusions, steps, l);
      Json stages = Json::array();
      bool ok = true;
      for (std::size_t i = 0; i < actions.size(); ++i) {
        std::vector<int> identity(static_cast<std::size_t>(chain.groups[0].order()));
        for (std::size_t a = 0; a < identity.size(); ++a) identity[a] = static_cast<int>(a);
        const ActionAudit audit = i == 0 ? audit_action(l, empty_action(chain.groups[0]), actions[0], identity)
                                         : audit_action(l, actions[i - 1], actions[i], chain.inclusions[i - 1]);
        ok = ok && audit.ok();
        stages.push_back(Json{{"step", i}, {"action", action_to_json(actions[i])}, {"audit", audit_to_json(audit)}});
      }
      output.emit(Json{{"format_version", kFormatVersion}, {"seed", seed}, {"ok", ok}, {"stages", stages}}.dump(2) +
                  "\n");
      if (!ok) {
        report_error(err, Json{{"error", "AuditFailed"}, {"message", "equivariance audit reported problems"}});
        return 1;
      }
    } else if (realize_cmd->parsed()) {
      LazyLimit l(LocalClassSpec::simplicial(), Seed(seed), realize_cap);
      Json stages = Json::array();
      auto flush = [&] {
        output.emit(Json{{"format_version", kFormatVersion}, {"seed", seed}, {"stages", stages}}.dump(2) + "\n");
      };
      if (format == "off") std::filesystem::create_directories(out_dir);
      // Stages are emitted one at a time so that a failed witness search
      // still leaves the completed prefix on the output.
      for (std::size_t k = 1; k <= steps; ++k) {
        std::vector<ChainStage> chain;
        try {
          chain = realize_chain(l, k);
        } catch (const Error&) {
          flush();
          throw;
        }
        const ChainStage& st = chain.back();
        const auto report = verify_chart(st.chart, static_cast<int>(k - 1), samples, k);
        Json sj{{"stage", k - 1},
                {"apex", st.apex},
                {"vertices", st.complex.vertices},
                {"faces", st.complex.maximal_faces()},
                {"fill_vertices", st.fill_vertices},
                {"candidates_tried", st.candidates_tried},
                {"chart", chart_to_json(st.chart)},
                {"report", report_to_json(report)}};
        if (k > 1) sj["restricts_to_previous"] = restricts_to(st.chart, chain[k - 2].chart);
        if (format == "off") {
          const auto path = (std::filesystem::path(out_dir) / ("stage_" + std::to_string(k - 1) + ".off")).string();
          write_text_file(path, to_off(st.chart));
          sj["off_file"] = path;
        }
        stages.push_back(sj);
      }
      flush();
    } else if (collapse_cmd->parsed()) {
      if (!in_path.empty()) {
        const auto loaded = load_structure(in_path);
        if (loaded.spec.kind() != ClassKind::SimplicialComplex) {
          throw ConfigError("collapse needs a simplicial complex");
        }
        const auto r = greedy_collapse(SimplicialComplex::from_structure(loaded.structure));
        Json j{{"format_version", kFormatVersion},
               {"collapsed_to_point", r.collapsed_to_point},
               {"collapses", r.collapses},
               {"reduced", structure_to_json(r.reduced.to_structure(), ClassKind::SimplicialComplex)}};
        output.emit(j.dump() + "\n");
      } else {
        if (!probe_n) throw ConfigError("collapse needs --in or --probe-n");
        if (collapse_cmd->count("--seed") == 0) throw ConfigError("collapse probe needs --seed");
        output.emit(to_csv(collapsibility_probe(*probe_n, samples, Seed(seed))));
      }
    }
  } catch (const Error& e) {
    report_error(err, error_object(e));
    return 1;
  } catch (const std::exception& e) {
    report_error(err, Json{{"error", "InternalError"}, {"message", e.what()}});
    return 1;
  }
  return 0;
}

}  // namespace rsc::cli
