#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "percept/image.hpp"
#include "percept/manifest.hpp"

namespace percept {

// Desk-scale stand-in corpus: `objects` procedural textured objects rendered
// on 5 distinct backgrounds through 5 simulated device profiles in 5
// orientations, plus a mock recognizer whose hit rate decays monotonically
// with acquisition severity.
struct SynthConfig {
  std::filesystem::path out_dir;
  uint64_t seed = 7;
  int objects = 10;
  int image_size = 128;  // square source images
  std::string platform = "mock";
};

struct SynthCorpus {
  std::filesystem::path manifest_path;
  std::filesystem::path predictions_path;
  std::filesystem::path images_dir;
  std::vector<ManifestEntry> entries;
};

SynthCorpus synthesize_corpus(const SynthConfig& cfg);

// Renders one corpus image; exposed for targeted tests.
Image render_synth_image(uint64_t corpus_seed, const std::string& object_id,
                         Background background, const std::string& device,
                         Orientation orientation, int size);

// Severity indices driving both the mock recognizer and the scene recipes.
int background_severity(Background b);
int device_severity(const std::string& device);
int orientation_severity(Orientation o);  // 0 front, 1 side, 2 top
const std::vector<std::string>& synth_devices();

// Hit probability before the per-image uniform draw. Monotone decreasing in
// background, orientation and device severity and in challenge level.
double mock_hit_probability(const ManifestEntry& entry);

// Deterministic predictions for any manifest (covers challenge rows too).
std::vector<PredictionRecord> mock_predictions(const std::vector<ManifestEntry>& entries,
                                               const std::string& platform, uint64_t seed);

// Multi-scale colored texture used by degradation-monotonicity tests.
Image make_textured_fixture(uint64_t seed, int size);

}  // namespace percept
