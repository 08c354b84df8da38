#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "percept/distances.hpp"
#include "percept/experiments.hpp"
#include "percept/features.hpp"
#include "percept/recognition.hpp"

namespace percept {

struct RunConfig {
  std::filesystem::path manifest_path;
  std::vector<FeatureMethod> native_features;  // extracted locally
  // ingested stores: label -> path (e.g. vgg16 -> embeddings/vgg16.emb)
  std::vector<std::pair<std::string, std::filesystem::path>> embedding_stores;
  ExtractorConfig extractor;
  std::vector<DistanceSpec> metrics;
  std::vector<Experiment> experiments = {Experiment::Background, Experiment::Orientation};
  std::vector<std::string> platforms;
  std::vector<std::filesystem::path> prediction_files;
  std::optional<EndpointDescriptor> endpoint;
  std::filesystem::path out_dir;
  int workers = 0;  // 0 = available parallelism, 1 = strictly sequential
  uint64_t seed = 0;
  GroupingOptions grouping;

  void validate() const;  // referenced paths, non-empty feature/metric lists
};

std::filesystem::path feature_store_path(const std::filesystem::path& out_dir,
                                         const std::string& label);

// One embedding-store file per native method covering every manifest image;
// images already present are skipped.
void extract_features(const RunConfig& cfg);

struct EvaluateOutputs {
  std::filesystem::path report_json;
  std::vector<std::filesystem::path> summary_csv;
  std::vector<std::filesystem::path> scatter_stems;  // .csv/.svg appended
};

// Full (experiment x platform x feature x metric) sweep: correlation report
// JSON, a Table-1-shaped abs_rho summary CSV per experiment/platform, and
// scatter exports for each top cell.
EvaluateOutputs evaluate(const RunConfig& cfg);

// Human-readable rendering of a report JSON (the `report` subcommand).
std::string render_report(const std::filesystem::path& report_json);

}  // namespace percept
