#include <cmath>
#include <vector>

#include "percept/error.hpp"
#include "percept/features.hpp"

namespace percept {

namespace {

constexpr double kPi = 3.14159265358979323846;

double bilinear_sample(const FloatPlane& p, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, p.width - 1);
  const int y1 = std::min(y0 + 1, p.height - 1);
  const double wx = x - x0;
  const double wy = y - y0;
  const double top = (1.0 - wx) * p.at(x0, y0) + wx * p.at(x1, y0);
  const double bot = (1.0 - wx) * p.at(x0, y1) + wx * p.at(x1, y1);
  return (1.0 - wy) * top + wy * bot;
}

}  // namespace

FeatureVector daisy_features(const Image& img, const ExtractorConfig& cfg) {
  const auto& dc = cfg.daisy;
  require(dc.radius > 0 && dc.rings > 0 && dc.histograms_per_ring > 0 &&
              dc.orientation_bins > 0 && dc.step > 0,
          Errc::bad_config, "daisy parameters must be positive");

  const Image gray =
      to_grayscale(standardize(img, cfg.preprocess.short_side, cfg.preprocess.crop));
  const FloatPlane plane = plane_from_channel(gray, 0);
  const int w = plane.width, h = plane.height;

  FloatPlane gx(w, h), gy(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      gx.at(x, y) = plane.at(reflect101(x + 1, w), y) - plane.at(reflect101(x - 1, w), y);
      gy.at(x, y) = plane.at(x, reflect101(y + 1, h)) - plane.at(x, reflect101(y - 1, h));
    }

  // half-rectified directional gradient maps, one per orientation bin
  const int T = dc.orientation_bins;
  std::vector<FloatPlane> maps(T);
  for (int o = 0; o < T; ++o) {
    const double theta = 2.0 * kPi * o / T;
    const double cs = std::cos(theta), sn = std::sin(theta);
    FloatPlane m(w, h);
    for (size_t i = 0; i < m.values.size(); ++i)
      m.values[i] = std::max(0.0, cs * gx.values[i] + sn * gy.values[i]);
    maps[o] = std::move(m);
  }

  // ring radii at radius*(i+1)/rings; smoothing sigma = half the ring radius,
  // center histogram at half the innermost ring sigma. Cascaded smoothing:
  // each level adds the incremental sigma over the previous one.
  std::vector<double> ring_radius(dc.rings), sigma(dc.rings + 1);
  for (int i = 0; i < dc.rings; ++i)
    ring_radius[i] = static_cast<double>(dc.radius) * (i + 1) / dc.rings;
  sigma[0] = ring_radius[0] / 4.0;
  for (int i = 0; i < dc.rings; ++i) sigma[i + 1] = ring_radius[i] / 2.0;

  // smoothed[level][orientation]
  std::vector<std::vector<FloatPlane>> smoothed(dc.rings + 1);
  for (int level = 0; level <= dc.rings; ++level) {
    smoothed[level].resize(T);
    const double prev = level == 0 ? 0.0 : sigma[level - 1];
    const double inc = std::sqrt(std::max(0.0, sigma[level] * sigma[level] - prev * prev));
    for (int o = 0; o < T; ++o) {
      const FloatPlane& src = level == 0 ? maps[o] : smoothed[level - 1][o];
      smoothed[level][o] = gaussian_blur(src, inc);
    }
  }

  const int margin = dc.radius + 1;
  require(w > 2 * margin && h > 2 * margin, Errc::too_small,
          "image leaves no room for the descriptor grid");

  const size_t dim = static_cast<size_t>(1 + dc.rings * dc.histograms_per_ring) * T;
  std::vector<double> pooled(dim, 0.0);
  std::vector<double> desc(dim);
  size_t count = 0;
  for (int y = margin; y <= h - 1 - margin; y += dc.step) {
    for (int x = margin; x <= w - 1 - margin; x += dc.step) {
      size_t k = 0;
      for (int o = 0; o < T; ++o) desc[k++] = smoothed[0][o].at(x, y);
      for (int r = 0; r < dc.rings; ++r) {
        for (int j = 0; j < dc.histograms_per_ring; ++j) {
          const double alpha = 2.0 * kPi * j / dc.histograms_per_ring;
          const double px = x + ring_radius[r] * std::cos(alpha);
          const double py = y + ring_radius[r] * std::sin(alpha);
          for (int o = 0; o < T; ++o) desc[k++] = bilinear_sample(smoothed[r + 1][o], px, py);
        }
      }
      double norm = 0.0;
      for (double v : desc) norm += v * v;
      norm = std::sqrt(norm);
      if (norm > 1e-12)
        for (size_t i = 0; i < dim; ++i) pooled[i] += desc[i] / norm;
      ++count;
    }
  }
  require(count > 0, Errc::too_small, "descriptor grid is empty");

  FeatureVector fv;
  fv.method = FeatureMethod::Daisy;
  fv.params_digest = params_digest(FeatureMethod::Daisy, cfg);
  fv.values.resize(dim);
  for (size_t i = 0; i < dim; ++i) fv.values[i] = pooled[i] / static_cast<double>(count);
  return fv;
}

}  // namespace percept
