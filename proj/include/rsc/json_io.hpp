#pragma once

#include <string>

#include <json.hpp>

#include "rsc/local_class.hpp"

namespace rsc {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

struct LoadedStructure {
  LocalClassSpec spec;
  Structure structure;
};

/// {"format_version", "class", "vertices", "faces"}; faces sorted by size then
/// lexicographically. Only symmetric built-in kinds are serialisable.
Json structure_to_json(const Structure& s, ClassKind kind);

/// Parses the structure format. With `require_valid`, non-members are
/// rejected with NotInClass carrying the validate report.
LoadedStructure structure_from_json(const Json& j, bool require_valid = true);

Json violations_to_json(const std::vector<Violation>& violations);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace rsc
