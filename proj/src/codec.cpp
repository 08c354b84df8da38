#include "percept/codec.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <jpeglib.h>
#include <png.h>

namespace percept {

namespace {

bool looks_like_png(const std::vector<uint8_t>& b) {
  static const uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  return b.size() >= 8 && std::memcmp(b.data(), sig, 8) == 0;
}

bool looks_like_jpeg(const std::vector<uint8_t>& b) {
  return b.size() >= 3 && b[0] == 0xff && b[1] == 0xd8 && b[2] == 0xff;
}

Image decode_png(const std::vector<uint8_t>& bytes) {
  png_image im;
  std::memset(&im, 0, sizeof(im));
  im.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&im, bytes.data(), bytes.size()))
    fail(Errc::malformed_stream, im.message);

  const bool color = (im.format & PNG_FORMAT_FLAG_COLOR) != 0;
  im.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image out(static_cast<int>(im.width), static_cast<int>(im.height), color ? 3 : 1);
  // white background removes any alpha channel deterministically
  png_color bg{255, 255, 255};
  if (!png_image_finish_read(&im, &bg, out.samples.data(), 0, nullptr)) {
    std::string msg = im.message;
    png_image_free(&im);
    fail(Errc::malformed_stream, msg);
  }
  return out;
}

struct JpegErrorTrap {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX] = {0};
};

void jpeg_error_exit_trap(j_common_ptr cinfo) {
  auto* trap = reinterpret_cast<JpegErrorTrap*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, trap->message);
  std::longjmp(trap->jump, 1);
}

void jpeg_swallow_message(j_common_ptr) {}

// Minimal EXIF scan: APP1 "Exif\0\0", TIFF header, IFD0 tag 0x0112.
int exif_orientation(const uint8_t* data, size_t len) {
  if (len < 14 || std::memcmp(data, "Exif\0\0", 6) != 0) return 1;
  const uint8_t* tiff = data + 6;
  const size_t tlen = len - 6;
  bool little;
  if (tiff[0] == 'I' && tiff[1] == 'I')
    little = true;
  else if (tiff[0] == 'M' && tiff[1] == 'M')
    little = false;
  else
    return 1;
  auto u16 = [&](size_t off) -> uint32_t {
    if (off + 2 > tlen) return 0;
    return little ? tiff[off] | (tiff[off + 1] << 8) : (tiff[off] << 8) | tiff[off + 1];
  };
  auto u32 = [&](size_t off) -> uint32_t {
    if (off + 4 > tlen) return 0;
    return little ? tiff[off] | (tiff[off + 1] << 8) | (tiff[off + 2] << 16) |
                        (static_cast<uint32_t>(tiff[off + 3]) << 24)
                  : (static_cast<uint32_t>(tiff[off]) << 24) | (tiff[off + 1] << 16) |
                        (tiff[off + 2] << 8) | tiff[off + 3];
  };
  if (u16(2) != 42) return 1;
  const uint32_t ifd = u32(4);
  const uint32_t count = u16(ifd);
  for (uint32_t i = 0; i < count; ++i) {
    const size_t entry = ifd + 2 + static_cast<size_t>(i) * 12;
    if (entry + 12 > tlen) break;
    if (u16(entry) == 0x0112) {
      const uint32_t v = u16(entry + 8);
      if (v >= 1 && v <= 8) return static_cast<int>(v);
      return 1;
    }
  }
  return 1;
}

Image decode_jpeg(const std::vector<uint8_t>& bytes) {
  jpeg_decompress_struct cinfo;
  JpegErrorTrap trap;
  cinfo.err = jpeg_std_error(&trap.mgr);
  trap.mgr.error_exit = jpeg_error_exit_trap;
  trap.mgr.output_message = jpeg_swallow_message;

  Image out;
  int orientation = 1;
  if (setjmp(trap.jump)) {
    jpeg_destroy_decompress(&cinfo);
    fail(Errc::malformed_stream, trap.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_save_markers(&cinfo, JPEG_APP0 + 1, 0xffff);
  if (jpeg_read_header(&cinfo, TRUE) != JPEG_HEADER_OK) {
    jpeg_destroy_decompress(&cinfo);
    fail(Errc::malformed_stream, "not a JPEG header");
  }
  for (auto* m = cinfo.marker_list; m != nullptr; m = m->next)
    if (m->marker == JPEG_APP0 + 1)
      orientation = exif_orientation(m->data, m->data_length);

  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  out = Image(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height),
              cinfo.output_components);
  const size_t stride = static_cast<size_t>(out.width) * out.channels;
  while (cinfo.output_scanline < cinfo.output_height) {
    uint8_t* row = out.samples.data() + stride * cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return apply_exif_orientation(out, orientation);
}

}  // namespace

Image apply_exif_orientation(const Image& img, int orientation) {
  if (orientation <= 1 || orientation > 8) return img;
  const bool transposed = orientation >= 5;
  const int ow = transposed ? img.height : img.width;
  const int oh = transposed ? img.width : img.height;
  Image out(ow, oh, img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      int dx = x, dy = y;
      switch (orientation) {
        case 2: dx = img.width - 1 - x; break;                                // mirror H
        case 3: dx = img.width - 1 - x; dy = img.height - 1 - y; break;       // rotate 180
        case 4: dy = img.height - 1 - y; break;                               // mirror V
        case 5: dx = y; dy = x; break;                                        // transpose
        case 6: dx = img.height - 1 - y; dy = x; break;                       // rotate 90 CW
        case 7: dx = img.height - 1 - y; dy = img.width - 1 - x; break;       // transverse
        case 8: dx = y; dy = img.width - 1 - x; break;                        // rotate 270 CW
      }
      for (int c = 0; c < img.channels; ++c) out.at(dx, dy, c) = img.at(x, y, c);
    }
  }
  return out;
}

Image decode_image(const std::vector<uint8_t>& bytes) {
  if (looks_like_png(bytes)) return decode_png(bytes);
  if (looks_like_jpeg(bytes)) return decode_jpeg(bytes);
  fail(Errc::unsupported_format, "stream is neither PNG nor JPEG");
}

std::vector<uint8_t> encode_png(const Image& img) {
  require(img.channels == 1 || img.channels == 3, Errc::unsupported_format,
          "PNG writer expects 1 or 3 channels");
  png_image im;
  std::memset(&im, 0, sizeof(im));
  im.version = PNG_IMAGE_VERSION;
  im.width = static_cast<png_uint_32>(img.width);
  im.height = static_cast<png_uint_32>(img.height);
  im.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&im, nullptr, &size, 0, img.samples.data(), 0, nullptr))
    fail(Errc::io_error, im.message);
  std::vector<uint8_t> bytes(size);
  if (!png_image_write_to_memory(&im, bytes.data(), &size, 0, img.samples.data(), 0, nullptr))
    fail(Errc::io_error, im.message);
  bytes.resize(size);
  return bytes;
}

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io_error, "cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  require(!in.bad(), Errc::io_error, "read failed for " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), Errc::io_error, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  require(out.good(), Errc::io_error, "write failed for " + path.string());
}

Image load_image(const std::filesystem::path& path) { return decode_image(read_file(path)); }

void save_png(const std::filesystem::path& path, const Image& img) {
  write_file(path, encode_png(img));
}

}  // namespace percept
