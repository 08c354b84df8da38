#include "percept/experiments.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "percept/error.hpp"

namespace percept {

std::string experiment_name(Experiment e) {
  return e == Experiment::Background ? "background" : "orientation";
}

Experiment parse_experiment(const std::string& token) {
  if (token == "background") return Experiment::Background;
  if (token == "orientation") return Experiment::Orientation;
  fail(Errc::bad_config, "unknown experiment '" + token + "'");
}

std::string reference_image(const std::vector<ManifestEntry>& entries,
                            const std::string& object_id, const std::string& reference_device) {
  std::string best;
  for (const auto& e : entries) {
    if (e.object_id != object_id || !e.challenge_free()) continue;
    if (e.orientation != Orientation::Front || e.background != Background::White) continue;
    if (e.device != reference_device) continue;
    if (best.empty() || e.image_id < best) best = e.image_id;
  }
  require(!best.empty(), Errc::missing_reference,
          "object '" + object_id + "' has no front/white/" + reference_device + " image");
  return best;
}

namespace {

std::vector<ExperimentGroup> assemble(
    Experiment experiment, const std::vector<ManifestEntry>& entries,
    const GroupingOptions& opts,
    const std::function<std::optional<std::string>(const ManifestEntry&)>& bucket_of) {
  require(!entries.empty(), Errc::empty_manifest, "manifest has no entries");
  std::map<std::pair<std::string, std::string>, ExperimentGroup> groups;
  for (const auto& e : entries) {
    if (!e.challenge_free()) continue;
    const auto bucket = bucket_of(e);
    if (!bucket.has_value()) continue;
    auto& group = groups[{e.device, *bucket}];
    if (group.member_ids.empty()) {
      group.experiment = experiment;
      group.device = e.device;
      group.bucket = *bucket;
    }
    group.member_ids.push_back(e.image_id);
    if (!group.object_refs.contains(e.object_id))
      group.object_refs.emplace(e.object_id,
                                reference_image(entries, e.object_id, opts.reference_device));
  }
  require(!groups.empty(), Errc::empty_manifest,
          "no entries pass the " + experiment_name(experiment) + " experiment filter");
  std::vector<ExperimentGroup> out;
  out.reserve(groups.size());
  for (auto& [key, group] : groups) {
    std::sort(group.member_ids.begin(), group.member_ids.end());
    out.push_back(std::move(group));
  }
  return out;
}

}  // namespace

std::vector<ExperimentGroup> build_background_groups(const std::vector<ManifestEntry>& entries,
                                                     const GroupingOptions& opts) {
  return assemble(Experiment::Background, entries, opts,
                  [&](const ManifestEntry& e) -> std::optional<std::string> {
                    if (!opts.background_views.contains(e.orientation)) return std::nullopt;
                    return background_name(e.background);
                  });
}

std::vector<ExperimentGroup> build_orientation_groups(const std::vector<ManifestEntry>& entries,
                                                      const GroupingOptions& opts) {
  return assemble(Experiment::Orientation, entries, opts,
                  [&](const ManifestEntry& e) -> std::optional<std::string> {
                    if (!opts.orientation_backdrops.contains(e.background)) return std::nullopt;
                    if (e.orientation == Orientation::Front) return "front";
                    if (e.orientation == Orientation::Top) return "top";
                    if (opts.side_class.contains(e.orientation)) return "side";
                    return std::nullopt;
                  });
}

std::vector<ExperimentGroup> build_groups(Experiment experiment,
                                          const std::vector<ManifestEntry>& entries,
                                          const GroupingOptions& opts) {
  return experiment == Experiment::Background ? build_background_groups(entries, opts)
                                              : build_orientation_groups(entries, opts);
}

double pairwise_sum(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  std::vector<double> level(values);
  while (level.size() > 1) {
    std::vector<double> next((level.size() + 1) / 2);
    for (size_t i = 0; i + 1 < level.size(); i += 2) next[i / 2] = level[i] + level[i + 1];
    if (level.size() % 2 == 1) next.back() = level.back();
    level = std::move(next);
  }
  return level[0];
}

double group_mean_distance(const ExperimentGroup& group,
                           const std::map<std::string, FeatureVector>& features,
                           const std::map<std::string, std::string>& img_to_object,
                           const DistanceSpec& spec) {
  require(!group.member_ids.empty(), Errc::empty_manifest, "group has no members");
  std::vector<double> distances;
  distances.reserve(group.member_ids.size());
  for (const auto& id : group.member_ids) {
    auto obj_it = img_to_object.find(id);
    require(obj_it != img_to_object.end(), Errc::unknown_object,
            "member '" + id + "' maps to no object");
    auto ref_it = group.object_refs.find(obj_it->second);
    require(ref_it != group.object_refs.end(), Errc::missing_reference,
            "group lacks reference for object '" + obj_it->second + "'");
    auto member_feat = features.find(id);
    require(member_feat != features.end(), Errc::missing_feature, "no feature for '" + id + "'");
    auto ref_feat = features.find(ref_it->second);
    require(ref_feat != features.end(), Errc::missing_feature,
            "no feature for reference '" + ref_it->second + "'");
    distances.push_back(distance(member_feat->second, ref_feat->second, spec));
  }
  return pairwise_sum(distances) / static_cast<double>(distances.size());
}

double group_accuracy(const ExperimentGroup& group,
                      const std::map<std::string, PredictionRecord>& predictions,
                      const std::map<std::string, ObjectLabelSet>& truths,
                      const std::map<std::string, std::string>& img_to_object) {
  std::vector<PredictionRecord> member_recs;
  member_recs.reserve(group.member_ids.size());
  for (const auto& id : group.member_ids) {
    auto it = predictions.find(id);
    require(it != predictions.end(), Errc::missing_prediction, "no prediction for '" + id + "'");
    member_recs.push_back(it->second);
  }
  return top5_accuracy(member_recs, truths, img_to_object);
}

}  // namespace percept
