#include "rsc/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rsc/errors.hpp"
#include "rsc/simplicial.hpp"

namespace rsc {

namespace {

LocalClassSpec spec_for(ClassKind kind) {
  switch (kind) {
    case ClassKind::SimplicialComplex:
      return LocalClassSpec::simplicial();
    case ClassKind::Hypergraph:
      return LocalClassSpec::hypergraph();
    case ClassKind::SpernerFamily:
      return LocalClassSpec::sperner();
    case ClassKind::Custom:
      break;
  }
  throw ConfigError("custom classes have no JSON form");
}

std::vector<Vertex> vertex_list(const Json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of integers");
  std::vector<Vertex> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 0xFFFFFFFFLL) {
      throw ConfigError(std::string(what) + " entries must be nonnegative 32-bit integers");
    }
    out.push_back(static_cast<Vertex>(v.get<long long>()));
  }
  return out;
}

}  // namespace

Json structure_to_json(const Structure& s, ClassKind kind) {
  if (kind == ClassKind::Custom || !s.signature().all_symmetric()) {
    throw ConfigError("only simplicial, hypergraph and sperner structures have a JSON form");
  }
  std::vector<Tuple> faces;
  for (const auto& [rel, tuples] : s.interpretations()) faces.insert(faces.end(), tuples.begin(), tuples.end());
  std::stable_sort(faces.begin(), faces.end(),
                   [](const Tuple& a, const Tuple& b) { return a.size() < b.size(); });
  Json j;
  j["format_version"] = kFormatVersion;
  j["class"] = to_string(kind);
  j["vertices"] = s.universe();
  j["faces"] = faces;
  return j;
}

LoadedStructure structure_from_json(const Json& j, bool require_valid) {
  if (!j.is_object()) throw ConfigError("structure JSON must be an object");
  if (j.contains("format_version") && j["format_version"] != kFormatVersion) {
    throw ConfigError("unsupported format_version");
  }
  if (!j.contains("class") || !j["class"].is_string()) throw ConfigError("missing \"class\"");
  const ClassKind kind = class_kind_from_string(j["class"].get<std::string>());
  LocalClassSpec spec = spec_for(kind);
  const VertexSet universe = make_vertex_set(vertex_list(j.value("vertices", Json::array()), "vertices"));
  std::vector<VertexSet> faces;
  for (const auto& f : j.value("faces", Json::array())) {
    auto raw = vertex_list(f, "faces");
    VertexSet face = make_vertex_set(raw);
    if (face.empty()) throw InvalidTuple("empty face");
    if (face.size() != raw.size()) throw InvalidTuple("face lists a vertex twice");
    if (!is_subset(face, universe)) throw InvalidTuple("face uses a vertex outside \"vertices\"");
    faces.push_back(std::move(face));
  }
  const bool facets_only = j.value("facets_only", false);
  if (facets_only && kind != ClassKind::SimplicialComplex) {
    throw ConfigError("facets_only applies to simplicial complexes only");
  }

  Structure s(spec.signature_ptr(), universe);
  if (kind == ClassKind::SimplicialComplex) {
    if (facets_only) {
      s = SimplicialComplex::from_facets(universe, faces).to_structure();
    } else {
      for (const auto& f : faces) {
        if (f.size() >= 2) s.add({static_cast<int>(f.size()), 0}, f);
      }
    }
  } else {
    for (const auto& f : faces) s.add({static_cast<int>(f.size()), 0}, f);
  }
  if (require_valid) require_member(s, spec, "input structure");
  return {std::move(spec), std::move(s)};
}

Json violations_to_json(const std::vector<Violation>& violations) {
  Json arr = Json::array();
  for (const auto& v : violations) arr.push_back({{"sentence", v.sentence}, {"witness", v.witness}});
  return arr;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace rsc
