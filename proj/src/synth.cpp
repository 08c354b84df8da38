#include "percept/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "percept/codec.hpp"
#include "percept/error.hpp"
#include "percept/rng.hpp"

namespace percept {

namespace {

struct Rgb {
  double r, g, b;
};

Rgb hsv_to_rgb(double h, double s, double v) {
  const double c = v * s;
  const double hp = h * 6.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  const double m = v - c;
  return {255.0 * (r + m), 255.0 * (g + m), 255.0 * (b + m)};
}

// two saturated, well-separated colors per object
std::pair<Rgb, Rgb> object_palette(uint64_t corpus_seed, const std::string& object_id) {
  Rng rng(fnv1a64("palette|" + object_id, corpus_seed));
  const double hue = rng.next_double();
  const double hue2 = std::fmod(hue + 0.32 + 0.2 * rng.next_double(), 1.0);
  const Rgb c1 = hsv_to_rgb(hue, 0.65 + 0.25 * rng.next_double(), 0.75 + 0.2 * rng.next_double());
  const Rgb c2 = hsv_to_rgb(hue2, 0.6 + 0.3 * rng.next_double(), 0.55 + 0.25 * rng.next_double());
  return {c1, c2};
}

void put_pixel(Image& img, int x, int y, const Rgb& c) {
  img.at(x, y, 0) = quantize_u8(c.r);
  img.at(x, y, 1) = quantize_u8(c.g);
  img.at(x, y, 2) = quantize_u8(c.b);
}

// Backgrounds are ordered by recognition severity. The fraction of tinted
// area grows monotonically with severity, which keeps color-histogram
// distance from the white reference unsaturated and strictly graded. Edge
// texture is deliberately non-monotone: the mild kitchen tiles are the
// busiest surface while the severe office/living-room scenes are smooth
// gradients with almost no hard edges.
// Untinted area is the exact white-backdrop color and every canonical tint
// sits mid-bin for the default 32-bin histogram, so the sensor noise ladder
// cannot walk mass across bin boundaries.
void render_background(Image& img, Background bg, Rng& rng) {
  const int w = img.width, h = img.height;
  const Rgb near_white{251, 251, 251};
  switch (bg) {
    case Background::White:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) put_pixel(img, x, y, near_white);
      break;
    case Background::Kitchen2D: {
      // fine tiles, ~30% carrying a warm tint: many short edges, mild tint
      const Rgb warm{236, 204, 156}, warm2{228, 196, 148};
      const int tile = 6;
      const uint64_t salt = rng.next_u64();
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          const uint64_t cell = fnv1a64(std::to_string(x / tile) + "," +
                                        std::to_string(y / tile), salt);
          const bool tinted = (cell % 100) < 30;
          put_pixel(img, x, y,
                    tinted ? (((x / tile + y / tile) % 2) ? warm : warm2) : near_white);
        }
      break;
    }
    case Background::LivingRoom2D: {
      // wallpaper stripes, ~55% tinted: moderate vertical edges, medium tint
      const Rgb tinta{228, 180, 116}, tintb{220, 172, 108};
      const int phase = static_cast<int>(rng.next_below(18));
      const uint64_t salt = rng.next_u64();
      for (int x = 0; x < w; ++x) {
        const int stripe = (x + phase) / 9;
        const bool tinted = (fnv1a64(std::to_string(stripe), salt) % 100) < 55;
        const Rgb c = tinted ? ((stripe % 2) ? tinta : tintb) : near_white;
        for (int y = 0; y < h; ++y) put_pixel(img, x, y, c);
      }
      break;
    }
    case Background::Office3D: {
      // pale-blue wash over ~80% of the area, one soft wall line, no texture.
      // Luma stays near the other backdrops so the object contour gets no
      // severity-graded contrast boost.
      const Rgb blue{172, 200, 236};
      const int band = h / 5;
      const double px = rng.uniform(0.0, 64.0), py = rng.uniform(0.0, 48.0);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          if (y < band) {
            put_pixel(img, x, y, near_white);
            continue;
          }
          const double shade = 3.0 * std::sin(2.0 * 3.14159265358979 * (x + px) / 64.0) *
                               std::sin(2.0 * 3.14159265358979 * (y + py) / 48.0);
          put_pixel(img, x, y, {blue.r + shade, blue.g + shade, blue.b + shade});
        }
      break;
    }
    case Background::LivingRoom3D: {
      // fully tinted room with soft furniture blobs: strongest hue shift,
      // still edge-free, luma comparable to the rest
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) put_pixel(img, x, y, {228, 172, 140});
      for (int i = 0; i < 6; ++i) {
        const double cx = rng.uniform(0.0, w), cy = rng.uniform(0.0, h);
        const double radius = rng.uniform(0.18, 0.36) * w;
        const double tone = rng.uniform(-3.5, 3.5);
        const int x0 = std::max(0, static_cast<int>(cx - radius));
        const int x1 = std::min(w - 1, static_cast<int>(cx + radius));
        const int y0 = std::max(0, static_cast<int>(cy - radius));
        const int y1 = std::min(h - 1, static_cast<int>(cy + radius));
        for (int y = y0; y <= y1; ++y)
          for (int x = x0; x <= x1; ++x) {
            const double dx = (x - cx) / radius, dy = (y - cy) / radius;
            const double falloff = 1.0 - (dx * dx + dy * dy);
            if (falloff <= 0.0) continue;
            Rgb c{img.at(x, y, 0) + tone * falloff * 0.6,
                  img.at(x, y, 1) + tone * falloff,
                  img.at(x, y, 2) + tone * falloff * 1.2};
            put_pixel(img, x, y, c);
          }
      }
      break;
    }
  }
}

// Object footprint is a fixed centered square; orientation changes only its
// internal stripe directions. Every pose is stripes of the same width and
// 50/50 color mix, so the color histogram is pose-invariant, while the
// fraction of re-oriented stripes grades the edge-profile change:
//   front: vertical stripes everywhere       (reference pose)
//   left:  45-degree stripes on half          (half the mass moves)
//   right: 135-degree stripes on half
//   back:  horizontal stripes on half
//   top:   horizontal stripes everywhere      (all the mass moves)
void render_object(Image& img, const Rgb& c1, const Rgb& c2, Orientation pose) {
  const int w = img.width, h = img.height;
  const int half = w / 4;  // footprint = central half of the frame
  const int x0 = w / 2 - half, x1 = w / 2 + half;
  const int y0 = h / 2 - half, y1 = h / 2 + half;
  const int stripe = 4;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const int lx = x - x0, ly = y - y0;
      bool altered = false;
      switch (pose) {
        case Orientation::Front: break;
        case Orientation::Left: altered = x < w / 2; break;
        case Orientation::Right: altered = x >= w / 2; break;
        case Orientation::Back: altered = y < h / 2; break;
        case Orientation::Top: altered = true; break;
      }
      bool first;
      if (!altered) {
        first = (lx / stripe) % 2 == 0;  // vertical stripes
      } else {
        switch (pose) {
          case Orientation::Left: first = (((lx + ly) / stripe) % 2 == 0); break;
          case Orientation::Right: first = (((lx - ly + 4 * w) / stripe) % 2 == 0); break;
          default: first = ((ly / stripe) % 2 == 0); break;  // back, top: horizontal
        }
      }
      put_pixel(img, x, y, first ? c1 : c2);
    }
  }
}

struct DeviceProfile {
  const char* name;
  double blur_sigma;
  double noise_sd;
  double gain;
};

// ordered by severity; the DSLR is the reference device. Noise and gain
// stay small enough that flat mid-bin regions keep their histogram bin and
// noise rarely crosses the edge-classifier threshold.
constexpr std::array<DeviceProfile, 5> kDevices = {{
    {"nikon_d80", 0.0, 0.0, 1.0},
    {"logitech_c920", 0.3, 0.5, 0.999},
    {"iphone_6s", 0.5, 1.0, 0.998},
    {"htc_one_x", 0.7, 1.5, 0.997},
    {"lg_leon", 0.9, 2.0, 0.996},
}};

void apply_device_profile(Image& img, const DeviceProfile& profile, Rng& rng) {
  if (profile.blur_sigma > 0.0) {
    for (int c = 0; c < img.channels; ++c) {
      const FloatPlane blurred = gaussian_blur(plane_from_channel(img, c), profile.blur_sigma);
      for (size_t i = 0; i < blurred.values.size(); ++i)
        img.samples[i * img.channels + c] = quantize_u8(blurred.values[i]);
    }
  }
  if (profile.noise_sd > 0.0 || profile.gain != 1.0) {
    for (size_t i = 0; i < img.samples.size(); ++i) {
      const double noise = profile.noise_sd > 0.0 ? profile.noise_sd * rng.next_gaussian() : 0.0;
      img.samples[i] = quantize_u8(profile.gain * img.samples[i] + noise);
    }
  }
}

const DeviceProfile& device_profile(const std::string& device) {
  for (const auto& d : kDevices)
    if (device == d.name) return d;
  fail(Errc::bad_config, "unknown synthetic device '" + device + "'");
}

// mock recognizer severity weights
constexpr double kBaseHit = 0.97;
constexpr double kBackgroundWeight = 0.16;
constexpr double kOrientationWeight = 0.18;
constexpr double kDeviceWeight = 0.02;
constexpr std::array<double, 6> kChallengeFactor = {1.0, 0.92, 0.80, 0.62, 0.45, 0.28};

std::vector<std::string> distractor_pool() {
  std::vector<std::string> pool;
  for (int i = 0; i < 24; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "widget_%02d", i);
    pool.emplace_back(buf);
  }
  return pool;
}

}  // namespace

int background_severity(Background b) {
  switch (b) {
    case Background::White: return 0;
    case Background::Kitchen2D: return 1;
    case Background::LivingRoom2D: return 2;
    case Background::Office3D: return 3;
    case Background::LivingRoom3D: return 4;
  }
  return 0;
}

int device_severity(const std::string& device) {
  for (size_t i = 0; i < kDevices.size(); ++i)
    if (device == kDevices[i].name) return static_cast<int>(i);
  return static_cast<int>(kDevices.size()) - 1;  // unknown devices read as worst
}

int orientation_severity(Orientation o) {
  switch (o) {
    case Orientation::Front: return 0;
    case Orientation::Left:
    case Orientation::Right:
    case Orientation::Back: return 1;
    case Orientation::Top: return 2;
  }
  return 0;
}

const std::vector<std::string>& synth_devices() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& d : kDevices) v.emplace_back(d.name);
    return v;
  }();
  return names;
}

Image render_synth_image(uint64_t corpus_seed, const std::string& object_id,
                         Background background, const std::string& device,
                         Orientation orientation, int size) {
  const std::string image_key = object_id + "|" + background_name(background) + "|" + device +
                                "|" + orientation_name(orientation);
  Rng rng(fnv1a64("render|" + image_key, corpus_seed));
  Image img(size, size, 3);
  render_background(img, background, rng);
  const auto [c1, c2] = object_palette(corpus_seed, object_id);
  render_object(img, c1, c2, orientation);
  apply_device_profile(img, device_profile(device), rng);
  return img;
}

double mock_hit_probability(const ManifestEntry& entry) {
  double p = kBaseHit - kBackgroundWeight * background_severity(entry.background) -
             kOrientationWeight * orientation_severity(entry.orientation) -
             kDeviceWeight * device_severity(entry.device);
  if (entry.challenge.has_value())
    p *= kChallengeFactor[static_cast<size_t>(std::clamp(entry.challenge->level, 0, 5))];
  return std::clamp(p, 0.01, 0.99);
}

std::vector<PredictionRecord> mock_predictions(const std::vector<ManifestEntry>& entries,
                                               const std::string& platform, uint64_t seed) {
  const auto pool = distractor_pool();
  std::vector<PredictionRecord> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    // the uniform draw is keyed by (object, orientation) of the *base* image
    // so severity shifts move every member's hit indicator monotonically
    const uint64_t draw_bits =
        fnv1a64("hit|" + e.object_id + "|" + orientation_name(e.orientation), seed);
    const double u = static_cast<double>(draw_bits >> 11) * 0x1.0p-53;
    const bool hit = u < mock_hit_probability(e);

    Rng rng(fnv1a64("record|" + e.image_id, seed));
    PredictionRecord rec;
    rec.image_id = e.image_id;
    rec.platform = platform;
    const int truth_rank = hit ? static_cast<int>(rng.next_below(5)) : -1;
    double confidence = 0.93 - 0.05 * rng.next_double();
    size_t pool_cursor = rng.next_below(pool.size());
    for (int rank = 0; rank < 5; ++rank) {
      LabelScore ls;
      if (rank == truth_rank) {
        ls.label = e.object_id;
      } else {
        ls.label = pool[pool_cursor % pool.size()];
        pool_cursor += 1 + rng.next_below(3);
      }
      ls.confidence = confidence;
      confidence *= 0.78 + 0.1 * rng.next_double();
      rec.labels.push_back(std::move(ls));
    }
    rec.normalize();
    out.push_back(std::move(rec));
  }
  return out;
}

SynthCorpus synthesize_corpus(const SynthConfig& cfg) {
  require(cfg.objects > 0, Errc::bad_config, "need at least one object");
  require(cfg.image_size >= 32, Errc::bad_config, "image_size must be >= 32");
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const fs::path images_dir = cfg.out_dir / "images";
  fs::create_directories(images_dir);

  constexpr std::array<Background, 5> backgrounds = {
      Background::White, Background::Kitchen2D, Background::LivingRoom2D, Background::Office3D,
      Background::LivingRoom3D};
  constexpr std::array<Orientation, 5> orientations = {Orientation::Front, Orientation::Left,
                                                       Orientation::Right, Orientation::Back,
                                                       Orientation::Top};

  SynthCorpus corpus;
  corpus.images_dir = images_dir;
  for (int obj = 0; obj < cfg.objects; ++obj) {
    char obj_id[16];
    std::snprintf(obj_id, sizeof(obj_id), "obj%02d", obj);
    for (const auto bg : backgrounds) {
      for (const auto& device : synth_devices()) {
        for (const auto pose : orientations) {
          ManifestEntry e;
          e.object_id = obj_id;
          e.background = bg;
          e.device = device;
          e.orientation = pose;
          e.image_id = std::string(obj_id) + "_" + background_name(bg) + "_" + device + "_" +
                       orientation_name(pose);
          e.path = images_dir / (e.image_id + ".png");
          e.aliases = {e.object_id};
          const Image img =
              render_synth_image(cfg.seed, obj_id, bg, device, pose, cfg.image_size);
          save_png(e.path, img);
          corpus.entries.push_back(std::move(e));
        }
      }
    }
  }

  corpus.manifest_path = cfg.out_dir / "manifest.csv";
  write_manifest(corpus.manifest_path, corpus.entries);

  corpus.predictions_path = cfg.out_dir / ("predictions_" + cfg.platform + ".jsonl");
  if (fs::exists(corpus.predictions_path)) fs::remove(corpus.predictions_path);
  append_predictions(corpus.predictions_path,
                     mock_predictions(corpus.entries, cfg.platform, cfg.seed));
  return corpus;
}

Image make_textured_fixture(uint64_t seed, int size) {
  Rng rng(fnv1a64("fixture", seed));
  Image img(size, size, 3);
  // high-contrast colors and one oriented wave per scale band, so each blur
  // severity step erases a fresh slice of structure
  const Rgb c1 = hsv_to_rgb(rng.next_double(), 0.55 + 0.3 * rng.next_double(),
                            0.85 + 0.12 * rng.next_double());
  const Rgb c2 = hsv_to_rgb(std::fmod(rng.next_double() + 0.4, 1.0),
                            0.55 + 0.3 * rng.next_double(), 0.2 + 0.18 * rng.next_double());
  const double tau = 2.0 * 3.14159265358979;
  struct Wave {
    double fx, fy, phase;
  };
  Wave waves[3];
  const double bands[3][2] = {{5.0, 8.0}, {11.0, 17.0}, {26.0, 40.0}};
  for (int b = 0; b < 3; ++b) {
    const double period = rng.uniform(bands[b][0], bands[b][1]);
    const double angle = rng.uniform(0.0, tau);
    waves[b] = {std::cos(angle) / period, std::sin(angle) / period, rng.uniform(0.0, tau)};
  }
  const int checker_cell = 3 + static_cast<int>(rng.next_below(2));
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double s = 0.0;
      for (const auto& w : waves) s += std::sin(tau * (w.fx * x + w.fy * y) + w.phase);
      const double t = 0.5 + 0.5 * std::tanh(1.5 * s);
      const bool checker = ((x / checker_cell + y / checker_cell) % 2) == 0;
      const double m = checker ? t : 1.0 - t;
      put_pixel(img, x, y,
                {c1.r * m + c2.r * (1.0 - m), c1.g * m + c2.g * (1.0 - m),
                 c1.b * m + c2.b * (1.0 - m)});
    }
  }
  return img;
}

}  // namespace percept
