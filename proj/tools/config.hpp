#pragma once

#include <istream>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace adslab::cli {

using ConfigValue = std::variant<double, bool, std::string, std::vector<std::string>>;

/// Flat view of a small TOML subset: `key = value` lines, `[table]` headers
/// (keys become "table.key"), numbers, booleans, basic strings and arrays of
/// strings. Throws std::runtime_error naming the line on anything else.
std::map<std::string, ConfigValue> parse_config(std::istream& in, const std::string& source);

}  // namespace adslab::cli
