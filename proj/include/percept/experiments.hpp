#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "percept/distances.hpp"
#include "percept/manifest.hpp"

namespace percept {

enum class Experiment { Background, Orientation };

std::string experiment_name(Experiment e);
Experiment parse_experiment(const std::string& token);

// Orientation classes for the orientation experiment: front, top, and a
// merged side class. Which orientations count as "side" differs between the
// two experiments, so both sets are options.
struct GroupingOptions {
  std::string reference_device = kDefaultReferenceDevice;
  // background experiment keeps front and side views
  std::set<Orientation> background_views = {Orientation::Front, Orientation::Left,
                                            Orientation::Right};
  // orientation experiment: side = left | right | back
  std::set<Orientation> side_class = {Orientation::Left, Orientation::Right,
                                      Orientation::Back};
  // orientation experiment keeps these backdrops
  std::set<Background> orientation_backdrops = {Background::White, Background::LivingRoom2D,
                                                Background::Kitchen2D};
};

struct ExperimentGroup {
  Experiment experiment = Experiment::Background;
  std::string device;
  std::string bucket;  // background name or orientation class name
  std::vector<std::string> member_ids;             // sorted
  std::map<std::string, std::string> object_refs;  // object -> reference image id

  std::string key() const { return device + "/" + bucket; }
};

// Challenge-free entry with front view, white background, reference device;
// lexicographic image_id tie-break. Throws MissingReference.
std::string reference_image(const std::vector<ManifestEntry>& entries,
                            const std::string& object_id, const std::string& reference_device);

// One group per (device, background) present, members filtered to front and
// side views. Throws EmptyManifest when nothing passes the filter.
std::vector<ExperimentGroup> build_background_groups(const std::vector<ManifestEntry>& entries,
                                                     const GroupingOptions& opts = {});

// One group per (device, orientation class), members filtered to the
// white/livingroom/kitchen backdrops.
std::vector<ExperimentGroup> build_orientation_groups(const std::vector<ManifestEntry>& entries,
                                                      const GroupingOptions& opts = {});

std::vector<ExperimentGroup> build_groups(Experiment experiment,
                                          const std::vector<ManifestEntry>& entries,
                                          const GroupingOptions& opts = {});

// Mean member-to-reference distance, pairwise-summed over members sorted by
// id so the result is independent of evaluation order.
double group_mean_distance(const ExperimentGroup& group,
                           const std::map<std::string, FeatureVector>& features,
                           const std::map<std::string, std::string>& img_to_object,
                           const DistanceSpec& spec);

// top5 accuracy restricted to the group's members. Throws MissingPrediction.
double group_accuracy(const ExperimentGroup& group,
                      const std::map<std::string, PredictionRecord>& predictions,
                      const std::map<std::string, ObjectLabelSet>& truths,
                      const std::map<std::string, std::string>& img_to_object);

double pairwise_sum(const std::vector<double>& values);

}  // namespace percept
