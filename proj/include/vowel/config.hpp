#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vowel/errors.hpp"
#include "vowel/textio.hpp"

namespace vowel {

// Flat key = value configuration file. Keys carry a section prefix
// ("gmm.centers_max"); '#' starts a comment; blank lines are ignored.
// CLI flags override file values.
struct ConfigFile {
  std::map<std::string, std::string> values;

  static ConfigFile load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path.string());
    ConfigFile cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view text = trim(line);
      if (const auto hash = text.find('#'); hash != std::string_view::npos)
        text = trim(text.substr(0, hash));
      if (text.empty()) continue;
      const auto eq = text.find('=');
      if (eq == std::string_view::npos)
        throw config_error("config: missing '=' at line " + std::to_string(line_no));
      const auto key = trim(text.substr(0, eq));
      const auto value = trim(text.substr(eq + 1));
      if (key.empty()) throw config_error("config: empty key at line " + std::to_string(line_no));
      cfg.values[std::string(key)] = std::string(value);
    }
    return cfg;
  }

  std::optional<std::string> get(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return it->second;
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
  }

  long get_int(const std::string& key, long fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    long out = 0;
    if (!try_parse_long(*v, out)) throw config_error("config: '" + key + "' is not an integer");
    return out;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    double out = 0.0;
    if (!try_parse_double(*v, out)) throw config_error("config: '" + key + "' is not a number");
    return out;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    throw config_error("config: '" + key + "' is not a boolean");
  }

  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::vector<double> out;
    for (const auto tok : split(*v, ',')) {
      double value = 0.0;
      if (!try_parse_double(tok, value))
        throw config_error("config: '" + key + "' has a non-numeric entry");
      out.push_back(value);
    }
    return out;
  }
};

}  // namespace vowel
