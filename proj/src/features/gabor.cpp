#include <cmath>

#include "percept/error.hpp"
#include "percept/features.hpp"
#include "percept/fft.hpp"

namespace percept {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct GaborPair {
  Kernel even;
  Kernel odd;
};

GaborPair make_gabor_kernels(double wavelength, double sigma, double aspect, double theta) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  const int side = 2 * radius + 1;
  GaborPair pair;
  pair.even = {side, side, std::vector<double>(static_cast<size_t>(side) * side)};
  pair.odd = {side, side, std::vector<double>(static_cast<size_t>(side) * side)};
  const double cs = std::cos(theta), sn = std::sin(theta);
  size_t i = 0;
  double env_sum = 0.0;
  for (int y = -radius; y <= radius; ++y) {
    for (int x = -radius; x <= radius; ++x, ++i) {
      const double xr = x * cs + y * sn;
      const double yr = -x * sn + y * cs;
      const double env =
          std::exp(-(xr * xr + aspect * aspect * yr * yr) / (2.0 * sigma * sigma));
      const double phase = 2.0 * kPi * xr / wavelength;
      pair.even.values[i] = env * std::cos(phase);
      pair.odd.values[i] = env * std::sin(phase);
      env_sum += env;
    }
  }
  // envelope-normalized so passband gain is comparable across scales
  for (auto& v : pair.even.values) v /= env_sum;
  for (auto& v : pair.odd.values) v /= env_sum;
  return pair;
}

}  // namespace

FeatureVector gabor_features(const Image& img, const ExtractorConfig& cfg) {
  const auto& gc = cfg.gabor;
  require(gc.scales >= 1 && gc.orientations >= 2, Errc::bad_config,
          "need >= 1 scale and >= 2 orientations");

  const Image gray =
      to_grayscale(standardize(img, cfg.preprocess.short_side, cfg.preprocess.crop));
  const FloatPlane plane = plane_from_channel(gray, 0);

  double max_sigma = gc.sigma_ratio * gc.base_wavelength;
  for (int s = 1; s < gc.scales; ++s) max_sigma *= 2.0;
  const int pad = std::max(1, static_cast<int>(std::ceil(3.0 * max_sigma)));
  const FftCorrelator corr(plane, pad);

  FeatureVector fv;
  fv.method = FeatureMethod::Gabor;
  fv.params_digest = params_digest(FeatureMethod::Gabor, cfg);
  fv.values.reserve(static_cast<size_t>(2) * gc.scales * gc.orientations);

  const double inv_n = 1.0 / static_cast<double>(plane.values.size());
  for (int s = 0; s < gc.scales; ++s) {
    const double wavelength = gc.base_wavelength * std::pow(2.0, s);
    const double sigma = gc.sigma_ratio * wavelength;
    for (int o = 0; o < gc.orientations; ++o) {
      const double theta = kPi * o / gc.orientations;
      const auto kernels = make_gabor_kernels(wavelength, sigma, gc.aspect, theta);
      const auto [re, im] = corr.correlate(kernels.even, kernels.odd);
      double mean = 0.0;
      std::vector<double> mag(re.values.size());
      for (size_t i = 0; i < mag.size(); ++i) {
        mag[i] = std::hypot(re.values[i], im.values[i]);
        mean += mag[i];
      }
      mean *= inv_n;
      double var = 0.0;
      for (double m : mag) {
        const double d = m - mean;
        var += d * d;
      }
      fv.values.push_back(mean);
      fv.values.push_back(std::sqrt(var * inv_n));
    }
  }
  return fv;
}

}  // namespace percept
