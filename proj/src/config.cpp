#include "percept/config.hpp"

#include <fstream>
#include <sstream>

#include "percept/error.hpp"

namespace percept {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s, const std::string& where) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    std::string out;
    for (size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) {
        ++i;
        switch (s[i]) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(Errc::bad_config, where + ": bad escape \\" + s[i]);
        }
      } else {
        out.push_back(s[i]);
      }
    }
    return out;
  }
  return s;
}

// strips a trailing comment that is not inside quotes
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::vector<std::string> parse_array(const std::string& body, const std::string& where) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') {
      quoted = !quoted;
      cur.push_back(c);
    } else if (c == ',' && !quoted) {
      const auto t = trim(cur);
      if (!t.empty()) out.push_back(unquote(t, where));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  const auto t = trim(cur);
  if (!t.empty()) out.push_back(unquote(t, where));
  return out;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line, table;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      require(line.back() == ']', Errc::bad_config, where + ": unterminated table header");
      table = trim(line.substr(1, line.size() - 2));
      require(!table.empty(), Errc::bad_config, where + ": empty table name");
      continue;
    }
    const auto eq = line.find('=');
    require(eq != std::string::npos, Errc::bad_config, where + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    require(!key.empty(), Errc::bad_config, where + ": empty key");
    if (!table.empty()) key = table + "." + key;
    const std::string value = trim(line.substr(eq + 1));
    require(!value.empty(), Errc::bad_config, where + ": empty value");
    if (value.front() == '[') {
      require(value.back() == ']', Errc::bad_config, where + ": unterminated array");
      cfg.entries_[key] = parse_array(value.substr(1, value.size() - 2), where);
    } else {
      cfg.entries_[key] = {unquote(value, where)};
    }
  }
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

bool ConfigFile::has(const std::string& key) const { return entries_.contains(key); }

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end() || it->second.empty()) return fallback;
  return it->second.front();
}

double ConfigFile::get_number(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end() || it->second.empty()) return fallback;
  try {
    return std::stod(it->second.front());
  } catch (const std::exception&) {
    fail(Errc::bad_config, "config key '" + key + "' is not a number");
  }
}

int64_t ConfigFile::get_int(const std::string& key, int64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end() || it->second.empty()) return fallback;
  try {
    return std::stoll(it->second.front());
  } catch (const std::exception&) {
    fail(Errc::bad_config, "config key '" + key + "' is not an integer");
  }
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end() || it->second.empty()) return fallback;
  const auto& v = it->second.front();
  if (v == "true") return true;
  if (v == "false") return false;
  fail(Errc::bad_config, "config key '" + key + "' is not a boolean");
}

std::vector<std::string> ConfigFile::get_list(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return {};
  return it->second;
}

}  // namespace percept
