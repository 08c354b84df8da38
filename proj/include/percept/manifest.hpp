#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "percept/challenges.hpp"
#include "percept/recognition.hpp"

namespace percept {

enum class Background { White, Kitchen2D, LivingRoom2D, Office3D, LivingRoom3D };
enum class Orientation { Front, Left, Right, Back, Top };

std::string background_name(Background b);
Background parse_background(const std::string& token);
std::string orientation_name(Orientation o);
Orientation parse_orientation(const std::string& token);

struct ManifestEntry {
  std::string image_id;
  std::filesystem::path path;
  std::string object_id;
  Background background = Background::White;
  std::string device;
  Orientation orientation = Orientation::Front;
  std::optional<ChallengeSpec> challenge;  // absent = challenge-free
  std::vector<std::string> aliases;        // accepted labels, defaults to object_id

  bool challenge_free() const { return !challenge.has_value() || challenge->level == 0; }
};

inline constexpr const char* kDefaultReferenceDevice = "nikon_d80";

// CSV, header:
//   image_id,path,object_id,background,device,orientation,challenge_kind,challenge_level,aliases
// aliases pipe-separated; empty challenge_kind means challenge-free.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestEntry>& entries);
void append_manifest_rows(const std::filesystem::path& path,
                          const std::vector<ManifestEntry>& entries);

std::map<std::string, ObjectLabelSet> truths_from_manifest(
    const std::vector<ManifestEntry>& entries);
std::map<std::string, std::string> image_to_object(const std::vector<ManifestEntry>& entries);

}  // namespace percept
