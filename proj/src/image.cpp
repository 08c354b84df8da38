#include "percept/image.hpp"

#include <algorithm>
#include <cmath>

namespace percept {

uint8_t quantize_u8(double v) {
  double r = std::floor(v + 0.5);
  if (r < 0.0) return 0;
  if (r > 255.0) return 255;
  return static_cast<uint8_t>(r);
}

int reflect101(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i = std::abs(i) % period;
  return i < n ? i : period - i;
}

Image to_grayscale(const Image& img) {
  if (img.channels == 1) return img;
  require(img.channels == 3, Errc::unsupported_format, "expected 1 or 3 channels");
  Image out(img.width, img.height, 1);
  const size_t n = img.pixel_count();
  for (size_t i = 0; i < n; ++i) {
    const double r = img.samples[i * 3 + 0];
    const double g = img.samples[i * 3 + 1];
    const double b = img.samples[i * 3 + 2];
    out.samples[i] = quantize_u8(0.299 * r + 0.587 * g + 0.114 * b);
  }
  return out;
}

Image resize_bilinear(const Image& img, int out_w, int out_h) {
  require(out_w > 0 && out_h > 0, Errc::bad_config, "resize target must be positive");
  if (out_w == img.width && out_h == img.height) return img;
  Image out(out_w, out_h, img.channels);
  const double sx = static_cast<double>(img.width) / out_w;
  const double sy = static_cast<double>(img.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double wx = fx - x0;
      for (int c = 0; c < img.channels; ++c) {
        const double top = (1.0 - wx) * img.at(x0, y0, c) + wx * img.at(x1, y0, c);
        const double bot = (1.0 - wx) * img.at(x0, y1, c) + wx * img.at(x1, y1, c);
        out.at(x, y, c) = quantize_u8((1.0 - wy) * top + wy * bot);
      }
    }
  }
  return out;
}

FloatPlane convolve2d(const FloatPlane& plane, const Kernel& kernel) {
  require(kernel.width % 2 == 1 && kernel.height % 2 == 1, Errc::even_kernel,
          "kernel sides must be odd");
  require(plane.width > 0 && plane.height > 0, Errc::bad_config, "empty plane");
  const int rx = kernel.width / 2;
  const int ry = kernel.height / 2;
  FloatPlane out(plane.width, plane.height);
  for (int y = 0; y < plane.height; ++y) {
    for (int x = 0; x < plane.width; ++x) {
      double acc = 0.0;
      for (int ky = -ry; ky <= ry; ++ky) {
        const int sy = reflect101(y + ky, plane.height);
        for (int kx = -rx; kx <= rx; ++kx) {
          const int sx = reflect101(x + kx, plane.width);
          acc += plane.at(sx, sy) * kernel.at(kx + rx, ky + ry);
        }
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

std::vector<double> gaussian_taps(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    taps[i + radius] = v;
    sum += v;
  }
  for (double& t : taps) t /= sum;
  return taps;
}

FloatPlane gaussian_blur(const FloatPlane& plane, double sigma) {
  if (sigma <= 0.0) return plane;
  const auto taps = gaussian_taps(sigma);
  const int radius = static_cast<int>(taps.size()) / 2;

  FloatPlane tmp(plane.width, plane.height);
  for (int y = 0; y < plane.height; ++y) {
    for (int x = 0; x < plane.width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k)
        acc += plane.at(reflect101(x + k, plane.width), y) * taps[k + radius];
      tmp.at(x, y) = acc;
    }
  }
  FloatPlane out(plane.width, plane.height);
  for (int y = 0; y < plane.height; ++y) {
    for (int x = 0; x < plane.width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k)
        acc += tmp.at(x, reflect101(y + k, plane.height)) * taps[k + radius];
      out.at(x, y) = acc;
    }
  }
  return out;
}

FloatPlane plane_from_channel(const Image& img, int channel) {
  FloatPlane out(img.width, img.height);
  const size_t n = img.pixel_count();
  for (size_t i = 0; i < n; ++i)
    out.values[i] = static_cast<double>(img.samples[i * img.channels + channel]);
  return out;
}

Image image_from_plane(const FloatPlane& plane) {
  Image out(plane.width, plane.height, 1);
  for (size_t i = 0; i < plane.values.size(); ++i) out.samples[i] = quantize_u8(plane.values[i]);
  return out;
}

Image center_crop(const Image& img, int crop_w, int crop_h) {
  require(crop_w <= img.width && crop_h <= img.height, Errc::too_small,
          "crop larger than image");
  const int x0 = (img.width - crop_w) / 2;
  const int y0 = (img.height - crop_h) / 2;
  Image out(crop_w, crop_h, img.channels);
  for (int y = 0; y < crop_h; ++y)
    for (int x = 0; x < crop_w; ++x)
      for (int c = 0; c < img.channels; ++c) out.at(x, y, c) = img.at(x0 + x, y0 + y, c);
  return out;
}

Image standardize(const Image& img, int short_side, int crop) {
  require(crop <= short_side, Errc::bad_config, "crop exceeds resized short side");
  int rw, rh;
  if (img.width <= img.height) {
    rw = short_side;
    rh = std::max(crop, static_cast<int>(std::lround(
                            static_cast<double>(img.height) * short_side / img.width)));
  } else {
    rh = short_side;
    rw = std::max(crop, static_cast<int>(std::lround(
                            static_cast<double>(img.width) * short_side / img.height)));
  }
  return center_crop(resize_bilinear(img, rw, rh), crop, crop);
}

}  // namespace percept
