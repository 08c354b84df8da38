#include <sstream>

#include "percept/error.hpp"
#include "percept/features.hpp"
#include "percept/rng.hpp"

namespace percept {

std::string method_name(FeatureMethod m) {
  switch (m) {
    case FeatureMethod::Color: return "color";
    case FeatureMethod::Daisy: return "daisy";
    case FeatureMethod::Edge: return "edge";
    case FeatureMethod::Gabor: return "gabor";
    case FeatureMethod::HOG: return "hog";
    case FeatureMethod::VGG16: return "vgg16";
    case FeatureMethod::VGG19: return "vgg19";
    case FeatureMethod::External: return "external";
  }
  return "?";
}

FeatureMethod parse_method(const std::string& token) {
  if (token == "color") return FeatureMethod::Color;
  if (token == "daisy") return FeatureMethod::Daisy;
  if (token == "edge") return FeatureMethod::Edge;
  if (token == "gabor") return FeatureMethod::Gabor;
  if (token == "hog") return FeatureMethod::HOG;
  if (token == "vgg16") return FeatureMethod::VGG16;
  if (token == "vgg19") return FeatureMethod::VGG19;
  return FeatureMethod::External;
}

bool is_native_method(FeatureMethod m) {
  switch (m) {
    case FeatureMethod::Color:
    case FeatureMethod::Daisy:
    case FeatureMethod::Edge:
    case FeatureMethod::Gabor:
    case FeatureMethod::HOG:
      return true;
    default:
      return false;
  }
}

uint64_t params_digest(FeatureMethod method, const ExtractorConfig& cfg) {
  std::ostringstream os;
  os << method_name(method) << "|" << cfg.preprocess.short_side << "," << cfg.preprocess.crop
     << "|";
  switch (method) {
    case FeatureMethod::Color:
      os << cfg.color.bins_per_channel;
      break;
    case FeatureMethod::Edge:
      os << cfg.edge.grid << "," << cfg.edge.threshold;
      break;
    case FeatureMethod::Gabor:
      os << cfg.gabor.scales << "," << cfg.gabor.orientations << ","
         << cfg.gabor.base_wavelength << "," << cfg.gabor.sigma_ratio << "," << cfg.gabor.aspect;
      break;
    case FeatureMethod::HOG:
      os << cfg.hog.cell << "," << cfg.hog.block << "," << cfg.hog.bins;
      break;
    case FeatureMethod::Daisy:
      os << cfg.daisy.radius << "," << cfg.daisy.rings << "," << cfg.daisy.histograms_per_ring
         << "," << cfg.daisy.orientation_bins << "," << cfg.daisy.step;
      break;
    default:
      break;
  }
  return fnv1a64(os.str());
}

FeatureVector extract(FeatureMethod method, const Image& img, const ExtractorConfig& cfg) {
  switch (method) {
    case FeatureMethod::Color: return color_histogram(img, cfg);
    case FeatureMethod::Edge: return edge_histogram(img, cfg);
    case FeatureMethod::Gabor: return gabor_features(img, cfg);
    case FeatureMethod::HOG: return hog_features(img, cfg);
    case FeatureMethod::Daisy: return daisy_features(img, cfg);
    default:
      fail(Errc::bad_config,
           method_name(method) + " features are ingested from stores, not computed");
  }
}

}  // namespace percept
