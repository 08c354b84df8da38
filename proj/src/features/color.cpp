#include "percept/error.hpp"
#include "percept/features.hpp"

namespace percept {

FeatureVector color_histogram(const Image& img, const ExtractorConfig& cfg) {
  require(img.channels == 3, Errc::gray_input, "color histogram needs an RGB image");
  const int bins = cfg.color.bins_per_channel;
  require(bins >= 2 && bins <= 256, Errc::bad_config, "bins_per_channel must be in [2,256]");

  const Image std_img = standardize(img, cfg.preprocess.short_side, cfg.preprocess.crop);
  FeatureVector fv;
  fv.method = FeatureMethod::Color;
  fv.params_digest = params_digest(FeatureMethod::Color, cfg);
  fv.values.assign(static_cast<size_t>(3) * bins, 0.0);

  const size_t n = std_img.pixel_count();
  for (size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      const int bin = std_img.samples[i * 3 + c] * bins / 256;
      fv.values[static_cast<size_t>(c) * bins + bin] += 1.0;
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (double& v : fv.values) v *= inv;
  return fv;
}

}  // namespace percept
