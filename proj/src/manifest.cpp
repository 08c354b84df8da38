#include "percept/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "percept/error.hpp"

namespace percept {

std::string background_name(Background b) {
  switch (b) {
    case Background::White: return "white";
    case Background::Kitchen2D: return "kitchen_2d";
    case Background::LivingRoom2D: return "livingroom_2d";
    case Background::Office3D: return "office_3d";
    case Background::LivingRoom3D: return "livingroom_3d";
  }
  return "?";
}

Background parse_background(const std::string& token) {
  if (token == "white") return Background::White;
  if (token == "kitchen_2d") return Background::Kitchen2D;
  if (token == "livingroom_2d") return Background::LivingRoom2D;
  if (token == "office_3d") return Background::Office3D;
  if (token == "livingroom_3d") return Background::LivingRoom3D;
  fail(Errc::parse_error, "unknown background '" + token + "'");
}

std::string orientation_name(Orientation o) {
  switch (o) {
    case Orientation::Front: return "front";
    case Orientation::Left: return "left";
    case Orientation::Right: return "right";
    case Orientation::Back: return "back";
    case Orientation::Top: return "top";
  }
  return "?";
}

Orientation parse_orientation(const std::string& token) {
  if (token == "front") return Orientation::Front;
  if (token == "left") return Orientation::Left;
  if (token == "right") return Orientation::Right;
  if (token == "back") return Orientation::Back;
  if (token == "top") return Orientation::Top;
  fail(Errc::parse_error, "unknown orientation '" + token + "'");
}

namespace {

// RFC4180-ish: quoted fields may contain commas and doubled quotes
std::vector<std::string> split_csv_line(const std::string& line, size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  require(!quoted, Errc::parse_error, "line " + std::to_string(line_no) + ": unclosed quote");
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

constexpr const char* kHeader =
    "image_id,path,object_id,background,device,orientation,challenge_kind,challenge_level,"
    "aliases";

std::string entry_to_row(const ManifestEntry& e) {
  std::ostringstream os;
  os << csv_escape(e.image_id) << "," << csv_escape(e.path.string()) << ","
     << csv_escape(e.object_id) << "," << background_name(e.background) << ","
     << csv_escape(e.device) << "," << orientation_name(e.orientation) << ",";
  if (e.challenge.has_value() && e.challenge->level > 0)
    os << challenge_name(e.challenge->kind) << "," << e.challenge->level;
  else
    os << ",";
  std::string joined;
  for (const auto& a : e.aliases) {
    if (!joined.empty()) joined += "|";
    joined += a;
  }
  os << "," << csv_escape(joined);
  return os.str();
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open manifest " + path.string());
  std::vector<ManifestEntry> entries;
  std::set<std::string> seen_ids;
  std::string line;
  size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      require(line == kHeader, Errc::parse_error,
              "manifest header mismatch; expected '" + std::string(kHeader) + "'");
      header_seen = true;
      continue;
    }
    auto fields = split_csv_line(line, line_no);
    require(fields.size() == 9, Errc::parse_error,
            "line " + std::to_string(line_no) + ": expected 9 fields, got " +
                std::to_string(fields.size()));
    ManifestEntry e;
    e.image_id = fields[0];
    e.path = fields[1];
    e.object_id = fields[2];
    require(!e.image_id.empty() && !e.object_id.empty(), Errc::parse_error,
            "line " + std::to_string(line_no) + ": empty image_id or object_id");
    require(seen_ids.insert(e.image_id).second, Errc::invariant_violation,
            "duplicate image_id '" + e.image_id + "'");
    try {
      e.background = parse_background(fields[3]);
      e.device = fields[4];
      require(!e.device.empty(), Errc::parse_error, "empty device");
      e.orientation = parse_orientation(fields[5]);
      if (!fields[6].empty()) {
        ChallengeSpec spec;
        spec.kind = parse_challenge(fields[6]);
        spec.level = std::stoi(fields[7]);
        require(spec.level >= 0 && spec.level <= 5, Errc::parse_error,
                "challenge level out of range");
        spec.seed = default_challenge_seed(e.image_id, spec.kind, spec.level);
        e.challenge = spec;
      }
    } catch (const Error& err) {
      fail(Errc::parse_error, "line " + std::to_string(line_no) + ": " + err.what());
    } catch (const std::exception& err) {
      fail(Errc::parse_error, "line " + std::to_string(line_no) + ": " + err.what());
    }
    if (!fields[8].empty()) {
      std::istringstream aliases(fields[8]);
      std::string alias;
      while (std::getline(aliases, alias, '|'))
        if (!alias.empty()) e.aliases.push_back(alias);
    }
    if (e.aliases.empty()) e.aliases.push_back(e.object_id);
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), Errc::io_error, "cannot write manifest " + path.string());
  out << kHeader << "\n";
  for (const auto& e : entries) out << entry_to_row(e) << "\n";
  require(out.good(), Errc::io_error, "write failed for " + path.string());
}

void append_manifest_rows(const std::filesystem::path& path,
                          const std::vector<ManifestEntry>& entries) {
  require(std::filesystem::exists(path), Errc::io_error,
          "manifest " + path.string() + " does not exist");
  std::ofstream out(path, std::ios::app);
  require(out.good(), Errc::io_error, "cannot append to manifest " + path.string());
  for (const auto& e : entries) out << entry_to_row(e) << "\n";
  require(out.good(), Errc::io_error, "append failed for " + path.string());
}

std::map<std::string, ObjectLabelSet> truths_from_manifest(
    const std::vector<ManifestEntry>& entries) {
  std::map<std::string, std::vector<std::string>> raw;
  for (const auto& e : entries) {
    auto& list = raw[e.object_id];
    list.insert(list.end(), e.aliases.begin(), e.aliases.end());
    list.push_back(e.object_id);
  }
  std::map<std::string, ObjectLabelSet> out;
  for (const auto& [object_id, aliases] : raw)
    out.emplace(object_id, ObjectLabelSet::make(object_id, aliases));
  return out;
}

std::map<std::string, std::string> image_to_object(const std::vector<ManifestEntry>& entries) {
  std::map<std::string, std::string> out;
  for (const auto& e : entries) out.emplace(e.image_id, e.object_id);
  return out;
}

}  // namespace percept
