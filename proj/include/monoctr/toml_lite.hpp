#pragma once

#include <string>

#include <json.hpp>

namespace monoctr {

/// Parses the TOML subset used by the config files: comments, [tables],
/// [[arrays of tables]], and key = value with strings, integers, floats,
/// booleans and flat arrays. Returns the document as a JSON object.
nlohmann::json parse_toml(const std::string& text);

nlohmann::json parse_toml_file(const std::string& path);

}  // namespace monoctr
