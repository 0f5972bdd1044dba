#include "facopt/config.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

namespace facopt {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return s.substr(begin, end - begin);
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config config;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    const std::string content = trim(line);
    if (content.empty()) {
      continue;
    }
    const std::size_t eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + content + "'");
    }
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    }
    if (value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty value for key '" + key + "'");
    }
    if (!config.values_.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
  }
  return config;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  return parse(in);
}

Config Config::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

std::optional<std::string> Config::take(const std::string& key) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    return std::nullopt;
  }
  consumed_[key] = true;
  return it->second;
}

std::string Config::get_string(const std::string& key) {
  auto value = take(key);
  if (!value) {
    throw ConfigError("missing required config key '" + key + "'");
  }
  return *value;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) {
  auto value = take(key);
  return value ? *value : fallback;
}

double Config::get_double(const std::string& key) {
  const std::string raw = get_string(key);
  std::size_t used = 0;
  double parsed = 0.0;
  try {
    parsed = std::stod(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != raw.size()) {
    throw ConfigError("config key '" + key + "': '" + raw +
                      "' is not a number");
  }
  return parsed;
}

double Config::get_double(const std::string& key, double fallback) {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) {
  const std::string raw = get_string(key);
  std::size_t used = 0;
  std::int64_t parsed = 0;
  try {
    parsed = std::stoll(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != raw.size()) {
    throw ConfigError("config key '" + key + "': '" + raw +
                      "' is not an integer");
  }
  return parsed;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) {
  return has(key) ? get_int(key) : fallback;
}

bool Config::has(const std::string& key) const {
  return values_.count(key) != 0;
}

void Config::finish() const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key)) {
      if (!unknown.empty()) {
        unknown += ", ";
      }
      unknown += key;
    }
  }
  if (!unknown.empty()) {
    throw ConfigError("unknown config keys: " + unknown);
  }
}

}  // namespace facopt
