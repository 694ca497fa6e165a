#pragma once

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace haystack {

namespace detail {

inline std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

}  // namespace detail

// Flat INI-style text: `[section]` headers, `key = value` lines, `#` starts a
// comment, lists are comma-separated on one line.  Keys are addressed as
// "section.key"; a later assignment to the same key wins.  There is no
// escaping, so values cannot contain `#` or a comma (list items).
class Config {
 public:
  Config() = default;

  static Config from_string(std::string_view text) {
    Config config;
    std::string section;
    std::size_t line_number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = text.find('\n', start);
      std::string_view line =
          text.substr(start, end == std::string_view::npos ? text.size() - start
                                                           : end - start);
      ++line_number;
      config.parse_line(line, line_number, section);
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    return config;
  }

  static Config from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw std::runtime_error("config: cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_string(buffer.str());
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  const std::string& raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw std::runtime_error("config: missing key '" + key + "'");
    }
    return it->second;
  }

  // CLI flags override file values through this.
  void set(const std::string& key, std::string value) {
    entries_[key] = std::move(value);
  }

  std::string get_string(const std::string& key) const { return raw(key); }

  std::string get_string(const std::string& key, std::string fallback) const {
    return has(key) ? raw(key) : std::move(fallback);
  }

  double get_real(const std::string& key) const {
    return parse_real(raw(key), key);
  }

  double get_real(const std::string& key, double fallback) const {
    return has(key) ? get_real(key) : fallback;
  }

  std::int64_t get_int(const std::string& key) const {
    return parse_int(raw(key), key);
  }

  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  std::uint64_t get_u64(const std::string& key) const {
    return parse_u64(raw(key), key);
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_u64(key) : fallback;
  }

  bool get_bool(const std::string& key) const {
    const std::string& value = raw(key);
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::runtime_error("config: key '" + key +
                             "' is not a boolean: " + value);
  }

  bool get_bool(const std::string& key, bool fallback) const {
    return has(key) ? get_bool(key) : fallback;
  }

  std::vector<double> get_real_list(const std::string& key) const {
    std::vector<double> values;
    for (const std::string& item : split_list(raw(key))) {
      values.push_back(parse_real(item, key));
    }
    return values;
  }

  std::vector<std::int64_t> get_int_list(const std::string& key) const {
    std::vector<std::int64_t> values;
    for (const std::string& item : split_list(raw(key))) {
      values.push_back(parse_int(item, key));
    }
    return values;
  }

  // Sorted view used for fingerprinting and for dumping effective settings.
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  void parse_line(std::string_view line, std::size_t line_number,
                  std::string& section) {
    const auto comment = line.find('#');
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    line = detail::trim(line);
    if (line.empty()) return;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        fail(line_number, "malformed section header");
      }
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section.empty()) fail(line_number, "empty section name");
      return;
    }
    const auto equals = line.find('=');
    if (equals == std::string_view::npos) {
      fail(line_number, "expected 'key = value'");
    }
    const std::string_view key = detail::trim(line.substr(0, equals));
    if (key.empty()) fail(line_number, "empty key");
    std::string full_key =
        section.empty() ? std::string(key) : section + "." + std::string(key);
    entries_[std::move(full_key)] =
        std::string(detail::trim(line.substr(equals + 1)));
  }

  [[noreturn]] static void fail(std::size_t line_number, const char* what) {
    throw std::runtime_error("config: line " + std::to_string(line_number) +
                             ": " + what);
  }

  static std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::size_t start = 0;
    if (detail::trim(value).empty()) return items;
    while (true) {
      const auto comma = value.find(',', start);
      items.emplace_back(
          detail::trim(std::string_view(value).substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return items;
  }

  static double parse_real(const std::string& text, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty() || errno == ERANGE) {
      throw std::runtime_error("config: key '" + key +
                               "' is not a number: " + text);
    }
    return value;
  }

  static std::int64_t parse_int(const std::string& text,
                                const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const long long value = std::strtoll(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || text.empty() || errno == ERANGE) {
      throw std::runtime_error("config: key '" + key +
                               "' is not an integer: " + text);
    }
    return value;
  }

  static std::uint64_t parse_u64(const std::string& text,
                                 const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || text.empty() ||
        errno == ERANGE || text.front() == '-') {
      throw std::runtime_error("config: key '" + key +
                               "' is not an unsigned integer: " + text);
    }
    return value;
  }

  std::map<std::string, std::string> entries_;
};

}  // namespace haystack
