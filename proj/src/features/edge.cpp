#include <array>
#include <cmath>

#include "percept/error.hpp"
#include "percept/features.hpp"

namespace percept {

namespace {

// MPEG-7 style 2x2 edge filters: vertical, horizontal, 45 deg, 135 deg,
// non-directional, applied to tile samples (a0 a1 / a2 a3).
constexpr double kSqrt2 = 1.41421356237309514547;

int classify_tile(double a0, double a1, double a2, double a3, double threshold) {
  const std::array<double, 5> response = {
      std::abs(a0 - a1 + a2 - a3),            // vertical
      std::abs(a0 + a1 - a2 - a3),            // horizontal
      std::abs(kSqrt2 * (a0 - a3)),           // 45 deg
      std::abs(kSqrt2 * (a1 - a2)),           // 135 deg
      std::abs(2.0 * (a0 - a1 - a2 + a3)),    // non-directional
  };
  int best = 0;
  for (int i = 1; i < 5; ++i)
    if (response[i] > response[best]) best = i;
  return response[best] > threshold ? best : -1;
}

}  // namespace

FeatureVector edge_histogram(const Image& img, const ExtractorConfig& cfg) {
  const int g = cfg.edge.grid;
  require(g >= 1, Errc::bad_config, "grid must be >= 1");
  const Image gray =
      to_grayscale(standardize(img, cfg.preprocess.short_side, cfg.preprocess.crop));
  require(gray.width >= 2 * g && gray.height >= 2 * g, Errc::too_small,
          "image smaller than grid granularity");

  FeatureVector fv;
  fv.method = FeatureMethod::Edge;
  fv.params_digest = params_digest(FeatureMethod::Edge, cfg);
  fv.values.assign(static_cast<size_t>(g) * g * 5, 0.0);

  // stride-1 2x2 windows; each window votes in the block holding its
  // top-left pixel, so block-boundary edges are still seen
  std::vector<std::array<double, 5>> counts(static_cast<size_t>(g) * g, {0, 0, 0, 0, 0});
  std::vector<double> totals(static_cast<size_t>(g) * g, 0.0);
  for (int y = 0; y + 1 < gray.height; ++y) {
    const int by = y * g / gray.height;
    for (int x = 0; x + 1 < gray.width; ++x) {
      const int cat =
          classify_tile(gray.at(x, y, 0), gray.at(x + 1, y, 0), gray.at(x, y + 1, 0),
                        gray.at(x + 1, y + 1, 0), cfg.edge.threshold);
      if (cat >= 0) {
        const size_t block = static_cast<size_t>(by) * g + x * g / gray.width;
        counts[block][cat] += 1.0;
        totals[block] += 1.0;
      }
    }
  }
  for (size_t block = 0; block < totals.size(); ++block) {
    if (totals[block] <= 0.0) continue;
    for (int i = 0; i < 5; ++i) fv.values[block * 5 + i] = counts[block][i] / totals[block];
  }
  return fv;
}

}  // namespace percept
