#pragma once

// Plain nested key-value config: one `dotted.key = value` per line, `#`
// comments. Loaders mark every key they read; anything left over is an
// unknown key and rejected, so typos fail loudly.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace tailsim {

class ConfigMap {
 public:
  ConfigMap() = default;

  static ConfigMap parse_string(const std::string& text);
  static ConfigMap parse_file(const std::string& path);  // throws ConfigError

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  // Typed getters; reading a key marks it as consumed.
  std::string get_string(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key, double def) const;
  int get_int(const std::string& key, int def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;

  // Comma/space separated list.
  std::vector<std::string> get_list(const std::string& key,
                                    const std::vector<std::string>& def) const;

  // Throws ConfigError naming every key that was never consumed.
  void reject_unknown_keys() const;

  // Canonical `key = value` lines, sorted; used for provenance records.
  std::string serialize() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

}  // namespace tailsim
