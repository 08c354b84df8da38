#include "percept/challenges.hpp"

#include <algorithm>
#include <cmath>

#include "percept/error.hpp"
#include "percept/rng.hpp"

namespace percept {

std::string challenge_name(ChallengeKind kind) {
  switch (kind) {
    case ChallengeKind::Underexposure: return "underexposure";
    case ChallengeKind::Overexposure: return "overexposure";
    case ChallengeKind::GaussianBlur: return "gaussian_blur";
    case ChallengeKind::Contrast: return "contrast";
    case ChallengeKind::DirtyLens: return "dirty_lens";
    case ChallengeKind::SaltPepper: return "salt_pepper";
    case ChallengeKind::Resize: return "resize";
  }
  return "?";
}

ChallengeKind parse_challenge(const std::string& token) {
  if (token == "underexposure") return ChallengeKind::Underexposure;
  if (token == "overexposure") return ChallengeKind::Overexposure;
  if (token == "gaussian_blur") return ChallengeKind::GaussianBlur;
  if (token == "contrast") return ChallengeKind::Contrast;
  if (token == "dirty_lens") return ChallengeKind::DirtyLens;
  if (token == "salt_pepper") return ChallengeKind::SaltPepper;
  if (token == "resize") return ChallengeKind::Resize;
  fail(Errc::bad_config, "unknown challenge '" + token + "'");
}

ChallengeParams challenge_schedule(ChallengeKind kind, int level) {
  require(level >= 0 && level <= 5, Errc::bad_level,
          "challenge level must be in 0..5, got " + std::to_string(level));
  ChallengeParams p;
  if (level == 0) return p;
  const int k = level;
  switch (kind) {
    case ChallengeKind::Underexposure:
      p.gain = 0.8 - 0.15 * (k - 1);  // 0.8 .. 0.2
      break;
    case ChallengeKind::Overexposure:
      p.gain = 1.2 + 0.2 * (k - 1);  // 1.2 .. 2.0
      break;
    case ChallengeKind::GaussianBlur:
      p.sigma = static_cast<double>(k);  // 1 .. 5 px
      break;
    case ChallengeKind::Contrast:
      p.alpha = 0.2 + 0.15 * (k - 1);  // 0.2 .. 0.8 toward mid-gray
      p.gamma = 1.0 + 0.05 * k;        // mild tilt on top of the blend
      break;
    case ChallengeKind::DirtyLens:
      p.blob_count = k;
      p.blob_opacity = 0.3 + 0.1 * (k - 1);  // 0.3 .. 0.7
      break;
    case ChallengeKind::SaltPepper:
      p.density = 0.05 * k;  // 0.05 .. 0.25
      break;
    case ChallengeKind::Resize: {
      constexpr double factors[5] = {1.0 / 1.5, 1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0, 1.0 / 5.0};
      p.scale = factors[k - 1];
      break;
    }
  }
  return p;
}

namespace {

Image apply_gain(const Image& img, double gain) {
  Image out = img;
  for (auto& s : out.samples) s = quantize_u8(gain * s);
  return out;
}

Image apply_blur(const Image& img, double sigma) {
  Image out(img.width, img.height, img.channels);
  for (int c = 0; c < img.channels; ++c) {
    const FloatPlane blurred = gaussian_blur(plane_from_channel(img, c), sigma);
    for (size_t i = 0; i < blurred.values.size(); ++i)
      out.samples[i * img.channels + c] = quantize_u8(blurred.values[i]);
  }
  return out;
}

Image apply_contrast(const Image& img, double alpha, double gamma) {
  uint8_t lut[256];
  for (int v = 0; v < 256; ++v) {
    const double x = v / 255.0;
    const double blended = (1.0 - alpha) * x + alpha * 0.5;
    lut[v] = quantize_u8(255.0 * std::pow(blended, gamma));
  }
  Image out = img;
  for (auto& s : out.samples) s = lut[s];
  return out;
}

Image apply_dirty_lens(const Image& img, int blob_count, double opacity, uint64_t seed) {
  Rng rng(seed);
  Image out = img;
  const double min_side = std::min(img.width, img.height);
  for (int b = 0; b < blob_count; ++b) {
    const double cx = rng.uniform(0.0, img.width);
    const double cy = rng.uniform(0.0, img.height);
    const double radius = rng.uniform(0.10, 0.28) * min_side;
    const double tone = rng.uniform(40.0, 90.0);  // dark smudge
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
    const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(cx + radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
    const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(cy + radius)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dx = (x - cx) / radius;
        const double dy = (y - cy) / radius;
        const double falloff = 1.0 - (dx * dx + dy * dy);
        if (falloff <= 0.0) continue;
        const double a = opacity * falloff;
        for (int c = 0; c < img.channels; ++c) {
          const double v = out.at(x, y, c);
          out.at(x, y, c) = quantize_u8((1.0 - a) * v + a * tone);
        }
      }
    }
  }
  return out;
}

Image apply_salt_pepper(const Image& img, double density, uint64_t seed) {
  Rng rng(seed);
  Image out = img;
  const size_t n = img.pixel_count();
  for (size_t i = 0; i < n; ++i) {
    const double u = rng.next_double();
    if (u >= density) continue;
    const uint8_t v = (rng.next_u64() & 1) ? 255 : 0;
    for (int c = 0; c < img.channels; ++c) out.samples[i * img.channels + c] = v;
  }
  return out;
}

Image apply_resize_challenge(const Image& img, double scale) {
  const int dw = std::max(1, static_cast<int>(std::lround(img.width * scale)));
  const int dh = std::max(1, static_cast<int>(std::lround(img.height * scale)));
  // antialias before decimating; plain bilinear aliases badly past 2x
  const double aa_sigma = 0.5 * std::sqrt(std::max(0.0, 1.0 / (scale * scale) - 1.0));
  Image filtered = img;
  if (aa_sigma > 0.05) filtered = apply_blur(img, aa_sigma);
  return resize_bilinear(resize_bilinear(filtered, dw, dh), img.width, img.height);
}

}  // namespace

Image apply_challenge(const Image& img, const ChallengeSpec& spec) {
  const ChallengeParams p = challenge_schedule(spec.kind, spec.level);
  if (spec.level == 0) return img;
  switch (spec.kind) {
    case ChallengeKind::Underexposure:
    case ChallengeKind::Overexposure:
      return apply_gain(img, p.gain);
    case ChallengeKind::GaussianBlur:
      return apply_blur(img, p.sigma);
    case ChallengeKind::Contrast:
      return apply_contrast(img, p.alpha, p.gamma);
    case ChallengeKind::DirtyLens:
      return apply_dirty_lens(img, p.blob_count, p.blob_opacity, spec.seed);
    case ChallengeKind::SaltPepper:
      return apply_salt_pepper(img, p.density, spec.seed);
    case ChallengeKind::Resize:
      return apply_resize_challenge(img, p.scale);
  }
  fail(Errc::bad_config, "unhandled challenge kind");
}

uint64_t default_challenge_seed(const std::string& image_id, ChallengeKind kind, int level) {
  return fnv1a64(image_id + "|" + challenge_name(kind) + "|" + std::to_string(level));
}

}  // namespace percept
