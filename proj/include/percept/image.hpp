#pragma once

#include <cstdint>
#include <vector>

#include "percept/error.hpp"

namespace percept {

// Decoded 8-bit raster, row-major, channel-interleaved. Color order is R,G,B.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 (gray) or 3 (RGB)
  std::vector<uint8_t> samples;

  Image() = default;
  Image(int w, int h, int c, uint8_t fill = 0)
      : width(w), height(h), channels(c), samples(static_cast<size_t>(w) * h * c, fill) {}

  size_t pixel_count() const { return static_cast<size_t>(width) * height; }

  uint8_t& at(int x, int y, int c) {
    return samples[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  uint8_t at(int x, int y, int c) const {
    return samples[(static_cast<size_t>(y) * width + x) * channels + c];
  }

  bool operator==(const Image&) const = default;
};

// Single-channel double-precision plane for filter arithmetic.
struct FloatPlane {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  FloatPlane() = default;
  FloatPlane(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {}

  double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
};

// Small dense kernel, row-major, both sides odd.
struct Kernel {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
};

// round-half-up then clamp to [0,255]; the single quantization rule for all
// image outputs
uint8_t quantize_u8(double v);

// reflect-101 index fold: ... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ...
int reflect101(int i, int n);

// BT.601 luma; grayscale input is returned unchanged.
Image to_grayscale(const Image& img);

// Bilinear resampling with half-pixel-center alignment.
Image resize_bilinear(const Image& img, int out_w, int out_h);

// Same-size convolution with reflect-101 borders. Throws EvenKernel.
FloatPlane convolve2d(const FloatPlane& plane, const Kernel& kernel);

// Separable Gaussian with reflect-101 borders, kernel truncated at 3 sigma.
FloatPlane gaussian_blur(const FloatPlane& plane, double sigma);
std::vector<double> gaussian_taps(double sigma);

// Channel <-> plane conversions.
FloatPlane plane_from_channel(const Image& img, int channel);
Image image_from_plane(const FloatPlane& plane);

// Resize so the short side matches `short_side`, then center-crop to
// crop x crop. Every feature extractor runs on this geometry.
Image standardize(const Image& img, int short_side = 256, int crop = 224);

Image center_crop(const Image& img, int crop_w, int crop_h);

}  // namespace percept
