#include <cmath>

#include "percept/error.hpp"
#include "percept/features.hpp"

namespace percept {

FeatureVector hog_features(const Image& img, const ExtractorConfig& cfg) {
  const int cell = cfg.hog.cell;
  const int block = cfg.hog.block;
  const int bins = cfg.hog.bins;
  require(cell > 0 && block > 0 && bins > 0, Errc::bad_config, "HOG parameters must be positive");

  const Image gray =
      to_grayscale(standardize(img, cfg.preprocess.short_side, cfg.preprocess.crop));
  require(gray.width % cell == 0 && gray.height % cell == 0, Errc::geometry_mismatch,
          "cell size does not tile the crop");
  const int cells_x = gray.width / cell;
  const int cells_y = gray.height / cell;
  require(cells_x >= block && cells_y >= block, Errc::geometry_mismatch,
          "crop smaller than one block");

  // centered differences with reflect-101; border gradients vanish
  const FloatPlane plane = plane_from_channel(gray, 0);
  std::vector<double> cell_hist(static_cast<size_t>(cells_x) * cells_y * bins, 0.0);
  const double bin_width = 180.0 / bins;
  for (int y = 0; y < gray.height; ++y) {
    for (int x = 0; x < gray.width; ++x) {
      const double gx =
          plane.at(reflect101(x + 1, gray.width), y) - plane.at(reflect101(x - 1, gray.width), y);
      const double gy = plane.at(x, reflect101(y + 1, gray.height)) -
                        plane.at(x, reflect101(y - 1, gray.height));
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      double angle = std::atan2(gy, gx) * 180.0 / 3.14159265358979323846;
      if (angle < 0.0) angle += 180.0;
      if (angle >= 180.0) angle -= 180.0;

      // bilinear vote between the two nearest bin centers (centers at b*bin_width)
      const double pos = angle / bin_width;
      const int b0 = static_cast<int>(std::floor(pos)) % bins;
      const int b1 = (b0 + 1) % bins;
      const double frac = pos - std::floor(pos);
      const size_t cell_idx =
          (static_cast<size_t>(y / cell) * cells_x + static_cast<size_t>(x / cell)) * bins;
      cell_hist[cell_idx + b0] += mag * (1.0 - frac);
      cell_hist[cell_idx + b1] += mag * frac;
    }
  }

  const int blocks_x = cells_x - block + 1;
  const int blocks_y = cells_y - block + 1;
  const size_t block_len = static_cast<size_t>(block) * block * bins;
  FeatureVector fv;
  fv.method = FeatureMethod::HOG;
  fv.params_digest = params_digest(FeatureMethod::HOG, cfg);
  fv.values.assign(static_cast<size_t>(blocks_x) * blocks_y * block_len, 0.0);

  constexpr double kEps = 1e-12;
  std::vector<double> v(block_len);
  size_t out = 0;
  for (int by = 0; by < blocks_y; ++by) {
    for (int bx = 0; bx < blocks_x; ++bx) {
      size_t k = 0;
      for (int cy = 0; cy < block; ++cy)
        for (int cx = 0; cx < block; ++cx) {
          const size_t idx =
              (static_cast<size_t>(by + cy) * cells_x + static_cast<size_t>(bx + cx)) * bins;
          for (int b = 0; b < bins; ++b) v[k++] = cell_hist[idx + b];
        }
      // L2-hys: normalize, clip at 0.2, renormalize; zero-energy blocks stay zero
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > kEps) {
        for (double& x : v) x = std::min(x / norm, 0.2);
        double norm2 = 0.0;
        for (double x : v) norm2 += x * x;
        norm2 = std::sqrt(norm2);
        for (double& x : v) x /= norm2;
        for (size_t i = 0; i < block_len; ++i) fv.values[out + i] = v[i];
      }
      out += block_len;
    }
  }
  return fv;
}

}  // namespace percept
