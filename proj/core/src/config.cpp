#include "tailsim/config.hpp"

#include "tailsim/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace tailsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConfigMap ConfigMap::parse_string(const std::string& text) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected `key = value`, got: " + t);
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

bool ConfigMap::has(const std::string& key) const { return values_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& def) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? def : it->second;
}

double ConfigMap::get_double(const std::string& key, double def) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return def;
  const std::string& v = it->second;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("key `" + key + "`: not a number: " + v);
  }
  return out;
}

int ConfigMap::get_int(const std::string& key, int def) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return def;
  const std::string& v = it->second;
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("key `" + key + "`: not an integer: " + v);
  }
  return out;
}

bool ConfigMap::get_bool(const std::string& key, bool def) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return def;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  throw ConfigError("key `" + key + "`: not a boolean: " + it->second);
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t def) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return def;
  const std::string& v = it->second;
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("key `" + key + "`: not an unsigned integer: " + v);
  }
  return out;
}

std::vector<std::string> ConfigMap::get_list(const std::string& key,
                                             const std::vector<std::string>& def) const {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return def;
  std::vector<std::string> out;
  std::string item;
  for (const char c : it->second + ",") {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  return out;
}

void ConfigMap::reject_unknown_keys() const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key)) {
      unknown += (unknown.empty() ? "" : ", ") + key;
    }
  }
  if (!unknown.empty()) {
    throw ConfigError("unknown config keys: " + unknown);
  }
}

std::string ConfigMap::serialize() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    out += key + " = " + value + "\n";
  }
  return out;
}

}  // namespace tailsim
