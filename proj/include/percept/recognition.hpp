#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace percept {

struct LabelScore {
  std::string label;
  double confidence = 0.0;
};

// One platform response for one image: ranked labels, best first.
struct PredictionRecord {
  std::string image_id;
  std::string platform;
  std::vector<LabelScore> labels;

  // confidences in [0,1] non-increasing, labels non-empty, no duplicates
  void validate() const;
  // stable-sorts by confidence descending, then validates
  void normalize();
};

struct ObjectLabelSet {
  std::string object_id;
  std::set<std::string> aliases;  // lowercase-folded, unique

  static ObjectLabelSet make(const std::string& object_id,
                             const std::vector<std::string>& raw_aliases);
};

std::string fold_label(const std::string& label);  // trim + ASCII lowercase

// True iff any of the first min(5, |labels|) labels matches an alias.
bool top5_hit(const PredictionRecord& rec, const ObjectLabelSet& truth);

// hits / total. Throws EmptySet on no records, UnknownObject when an image
// has no object mapping or the object has no label set.
double top5_accuracy(const std::vector<PredictionRecord>& recs,
                     const std::map<std::string, ObjectLabelSet>& truths,
                     const std::map<std::string, std::string>& image_to_object);

// JSONL: {"image_id":..., "platform":..., "labels":[{"label":..., "confidence":...}]}
std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path);
void append_predictions(const std::filesystem::path& path,
                        const std::vector<PredictionRecord>& recs);

struct EndpointDescriptor {
  std::string url_template;    // e.g. http://host:port/recognize/{image}
  std::string auth_header;     // empty = no auth header
  std::string auth_value_env;  // environment variable holding the secret
  std::string platform = "remote";
  int max_in_flight = 4;
  int timeout_ms = 10000;
};

// Cache-first fetch. Images already in the JSONL cache are not re-fetched;
// new responses are appended. Individual failures are skipped; throws
// AuthRejected when every request was denied, EndpointUnreachable when every
// request failed.
std::vector<PredictionRecord> fetch_predictions(
    const EndpointDescriptor& endpoint,
    const std::vector<std::pair<std::string, std::filesystem::path>>& images,
    const std::filesystem::path& cache_path);

}  // namespace percept
