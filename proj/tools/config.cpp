#include "config.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace adslab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment outside string literals.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

std::string parse_string(const std::string& v, const std::string& where) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') throw std::runtime_error(where + ": malformed string");
  std::string out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] == '\\' && i + 2 < v.size()) {
      const char c = v[++i];
      out.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
    } else if (v[i] == '"') {
      throw std::runtime_error(where + ": unexpected quote in string");
    } else {
      out.push_back(v[i]);
    }
  }
  return out;
}

ConfigValue parse_value(const std::string& v, const std::string& where) {
  if (v.empty()) throw std::runtime_error(where + ": missing value");
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '"') return parse_string(v, where);
  if (v.front() == '[') {
    if (v.back() != ']') throw std::runtime_error(where + ": unterminated array");
    std::vector<std::string> items;
    const std::string body = trim(v.substr(1, v.size() - 2));
    std::size_t pos = 0;
    while (pos < body.size()) {
      const auto comma = body.find(',', pos);
      const std::string item = trim(body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (!item.empty()) items.push_back(parse_string(item, where));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return items;
  }
  std::string digits;
  for (char c : v)
    if (c != '_') digits.push_back(c);
  double x = 0.0;
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), x);
  if (ec != std::errc() || end != digits.data() + digits.size())
    throw std::runtime_error(where + ": cannot parse value '" + v + "'");
  return x;
}

}  // namespace

std::map<std::string, ConfigValue> parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, ConfigValue> out;
  std::string table;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string where = source + ":" + std::to_string(line);
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw std::runtime_error(where + ": malformed table header");
      table = trim(s.substr(1, s.size() - 2));
      if (!valid_key(table)) throw std::runtime_error(where + ": bad table name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw std::runtime_error(where + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    if (key.size() >= 2 && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
    if (!valid_key(key)) throw std::runtime_error(where + ": bad key '" + key + "'");
    const std::string full = table.empty() ? key : table + "." + key;
    if (out.contains(full)) throw std::runtime_error(where + ": duplicate key " + full);
    out[full] = parse_value(trim(s.substr(eq + 1)), where);
  }
  return out;
}

}  // namespace adslab::cli
