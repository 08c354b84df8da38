#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "percept/image.hpp"

namespace percept {

// Decodes a PNG or JPEG stream into an 8-bit gray or RGB image. JPEG EXIF
// orientation is applied. Throws MalformedStream / UnsupportedFormat.
Image decode_image(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> encode_png(const Image& img);

Image load_image(const std::filesystem::path& path);
void save_png(const std::filesystem::path& path, const Image& img);

std::vector<uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<uint8_t>& bytes);

// Remaps samples for an EXIF orientation tag in 1..8. Exposed for tests.
Image apply_exif_orientation(const Image& img, int orientation);

}  // namespace percept
