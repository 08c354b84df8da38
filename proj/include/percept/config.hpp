#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace percept {

// Minimal structured config reader: `key = value` lines grouped under
// `[table]` / `[table.sub]` headers, `#` comments, values are strings
// (quoted or bare), numbers, booleans, or flat arrays. Keys flatten to
// dotted paths ("extract.features"). Command-line flags override these.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::filesystem::path& path);
  static ConfigFile parse(const std::string& text, const std::string& origin = "<config>");

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback = "") const;
  double get_number(const std::string& key, double fallback) const;
  int64_t get_int(const std::string& key, int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;  // empty when absent

  const std::map<std::string, std::vector<std::string>>& entries() const { return entries_; }

 private:
  // scalar values stored as single-element lists
  std::map<std::string, std::vector<std::string>> entries_;
};

}  // namespace percept
