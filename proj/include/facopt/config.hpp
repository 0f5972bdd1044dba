#pragma once

// Flat key = value configuration files. Lines hold one "key = value" pair;
// '#' starts a comment, blank lines are ignored. Keys may repeat nowhere.
// Callers read values through the typed getters, then call
// finish() which rejects any key that was never consumed, so misspelled
// options fail loudly instead of being ignored.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace facopt {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class Config {
 public:
  static Config parse(std::istream& in);
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  // Required getters: throw ConfigError when the key is absent or the value
  // does not parse as the requested type.
  std::string get_string(const std::string& key);
  double get_double(const std::string& key);
  std::int64_t get_int(const std::string& key);

  // Defaulted getters: return the fallback when the key is absent.
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key, double fallback);
  std::int64_t get_int(const std::string& key, std::int64_t fallback);

  bool has(const std::string& key) const;

  // Throws ConfigError naming every key that was never consumed.
  void finish() const;

 private:
  std::optional<std::string> take(const std::string& key);

  std::map<std::string, std::string> values_;
  std::map<std::string, bool> consumed_;
};

}  // namespace facopt
