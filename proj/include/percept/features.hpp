#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "percept/image.hpp"

namespace percept {

enum class FeatureMethod { Color, Daisy, Edge, Gabor, HOG, VGG16, VGG19, External };

std::string method_name(FeatureMethod m);
// Accepts lowercase tokens (color, daisy, edge, gabor, hog, vgg16, vgg19);
// anything else maps to External with the token as its name.
FeatureMethod parse_method(const std::string& token);

// Method-tagged fixed-length real vector, the common currency between
// extractors, stores and metrics.
struct FeatureVector {
  FeatureMethod method = FeatureMethod::External;
  std::string external_name;  // set when method == External
  uint64_t params_digest = 0;
  std::vector<double> values;

  size_t dim() const { return values.size(); }
  std::string method_label() const {
    return method == FeatureMethod::External ? external_name : method_name(method);
  }
};

struct PreprocessConfig {
  int short_side = 256;
  int crop = 224;
};

struct ColorConfig {
  int bins_per_channel = 32;
};

struct EdgeConfig {
  int grid = 4;           // g x g blocks
  double threshold = 11;  // minimal winning filter response for a 2x2 tile
};

struct GaborConfig {
  int scales = 4;
  int orientations = 6;
  double base_wavelength = 4.0;  // geometric ladder, ratio 2
  double sigma_ratio = 0.56;     // sigma = sigma_ratio * wavelength
  double aspect = 0.5;
};

struct HogConfig {
  int cell = 8;
  int block = 2;  // block x block cells
  int bins = 9;   // unsigned orientation, 0..180 deg
};

struct DaisyConfig {
  int radius = 15;
  int rings = 3;
  int histograms_per_ring = 8;
  int orientation_bins = 8;
  int step = 16;
};

struct ExtractorConfig {
  PreprocessConfig preprocess;
  ColorConfig color;
  EdgeConfig edge;
  GaborConfig gabor;
  HogConfig hog;
  DaisyConfig daisy;
};

// Stable digest of the parameters that affect one method's output.
uint64_t params_digest(FeatureMethod method, const ExtractorConfig& cfg);

FeatureVector color_histogram(const Image& img, const ExtractorConfig& cfg = {});
FeatureVector edge_histogram(const Image& img, const ExtractorConfig& cfg = {});
FeatureVector gabor_features(const Image& img, const ExtractorConfig& cfg = {});
FeatureVector hog_features(const Image& img, const ExtractorConfig& cfg = {});
FeatureVector daisy_features(const Image& img, const ExtractorConfig& cfg = {});

// Dispatch over the five native extractors. Throws for ingested methods
// (VGG16/VGG19/External), which only ever come from embedding stores.
FeatureVector extract(FeatureMethod method, const Image& img, const ExtractorConfig& cfg = {});

bool is_native_method(FeatureMethod m);

}  // namespace percept
