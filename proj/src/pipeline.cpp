#include "percept/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "percept/codec.hpp"
#include "percept/embedding_store.hpp"
#include "percept/error.hpp"
#include "percept/parallel.hpp"
#include "percept/stats.hpp"

namespace percept {

using nlohmann::json;

void RunConfig::validate() const {
  require(!manifest_path.empty(), Errc::bad_config, "manifest path is required");
  require(std::filesystem::exists(manifest_path), Errc::bad_config,
          "manifest " + manifest_path.string() + " does not exist");
  require(!native_features.empty() || !embedding_stores.empty(), Errc::bad_config,
          "select at least one feature");
  require(!metrics.empty(), Errc::bad_config, "select at least one metric");
  require(!out_dir.empty(), Errc::bad_config, "output directory is required");
  for (const auto& m : native_features)
    require(is_native_method(m), Errc::bad_config,
            method_name(m) + " cannot be extracted; point an embedding store at it instead");
  for (const auto& [label, path] : embedding_stores)
    require(std::filesystem::exists(path), Errc::bad_config,
            "embedding store " + path.string() + " does not exist");
  for (const auto& p : prediction_files)
    require(std::filesystem::exists(p), Errc::bad_config,
            "prediction file " + p.string() + " does not exist");
}

std::filesystem::path feature_store_path(const std::filesystem::path& out_dir,
                                         const std::string& label) {
  return out_dir / ("features_" + label + ".emb");
}

void extract_features(const RunConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  const auto entries = read_manifest(cfg.manifest_path);
  require(!entries.empty(), Errc::empty_manifest, "manifest has no entries");

  for (const auto method : cfg.native_features) {
    const std::string label = method_name(method);
    const auto store_path = feature_store_path(cfg.out_dir, label);

    // figure out what is missing; a fresh store means everything
    std::vector<const ManifestEntry*> missing;
    std::optional<EmbeddingStoreWriter> writer;
    uint32_t known_dim = 0;
    if (std::filesystem::exists(store_path) && std::filesystem::file_size(store_path) > 0) {
      const auto existing = EmbeddingStore::open(store_path, label);
      known_dim = existing.dim();
      for (const auto& e : entries)
        if (!existing.contains(e.image_id)) missing.push_back(&e);
      writer.emplace(store_path, known_dim);
    } else {
      for (const auto& e : entries) missing.push_back(&e);
    }
    if (missing.empty()) continue;

    // batches bound peak memory on wide descriptors
    constexpr size_t kBatch = 64;
    std::vector<FeatureVector> slots;
    for (size_t start = 0; start < missing.size(); start += kBatch) {
      const size_t count = std::min(kBatch, missing.size() - start);
      slots.assign(count, {});
      parallel_for(count, cfg.workers, [&](size_t i) {
        const ManifestEntry& e = *missing[start + i];
        try {
          slots[i] = extract(method, load_image(e.path), cfg.extractor);
        } catch (const Error& err) {
          fail(err.code(), "image '" + e.image_id + "': " + err.what());
        }
      });
      for (size_t i = 0; i < count; ++i) {
        if (!writer.has_value())
          writer.emplace(store_path, static_cast<uint32_t>(slots[i].dim()));
        writer->append(missing[start + i]->image_id, slots[i].values);
      }
    }
    if (writer.has_value()) writer->finalize();
  }
}

namespace {

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == ':' || c == '/' || c == '.') c = '-';
  return out;
}

struct Cell {
  Experiment experiment;
  size_t feature_idx;
  size_t metric_idx;
};

}  // namespace

EvaluateOutputs evaluate(const RunConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  const auto entries = read_manifest(cfg.manifest_path);
  const auto truths = truths_from_manifest(entries);
  const auto img_to_obj = image_to_object(entries);

  // feature label -> per-image vectors
  std::vector<std::string> feature_labels;
  std::map<std::string, std::map<std::string, FeatureVector>> features;
  auto load_store = [&](const std::string& label, const std::filesystem::path& path) {
    require(std::filesystem::exists(path), Errc::missing_feature,
            "feature store " + path.string() + " not found; run `extract` first");
    const auto store = EmbeddingStore::open(path, label);
    auto& slot = features[label];
    for (const auto& id : store.ids()) slot.emplace(id, store.get(id));
    feature_labels.push_back(label);
  };
  for (const auto method : cfg.native_features) {
    const auto label = method_name(method);
    load_store(label, feature_store_path(cfg.out_dir, label));
  }
  for (const auto& [label, path] : cfg.embedding_stores) load_store(label, path);

  // predictions per platform
  std::map<std::string, std::map<std::string, PredictionRecord>> by_platform;
  for (const auto& file : cfg.prediction_files)
    for (auto& rec : load_predictions(file)) {
      auto platform = rec.platform;
      by_platform[platform].insert_or_assign(rec.image_id, std::move(rec));
    }
  std::vector<std::string> platforms = cfg.platforms;
  if (platforms.empty())
    for (const auto& [platform, recs] : by_platform) platforms.push_back(platform);

  EvaluateOutputs outputs;
  json report_experiments = json::object();

  for (const auto experiment : cfg.experiments) {
    const auto groups = build_groups(experiment, entries, cfg.grouping);
    const std::string exp_name = experiment_name(experiment);

    // group accuracies per platform; a platform missing predictions for some
    // member drops out of this experiment, others proceed
    std::map<std::string, std::map<std::string, std::pair<double, int>>> platform_acc;
    for (const auto& platform : platforms) {
      auto preds_it = by_platform.find(platform);
      if (preds_it == by_platform.end()) {
        std::cerr << "warning: no predictions for platform '" << platform << "'; skipping\n";
        continue;
      }
      try {
        std::map<std::string, std::pair<double, int>> acc;
        for (const auto& g : groups)
          acc[g.key()] = {group_accuracy(g, preds_it->second, truths, img_to_obj),
                          static_cast<int>(g.member_ids.size())};
        platform_acc.emplace(platform, std::move(acc));
      } catch (const Error& e) {
        if (e.code() != Errc::missing_prediction) throw;
        std::cerr << "warning: " << exp_name << "/" << platform << ": " << e.what()
                  << "; skipping platform\n";
      }
    }

    // distance cells fan out; each writes only its own slot
    std::vector<Cell> cells;
    for (size_t f = 0; f < feature_labels.size(); ++f)
      for (size_t m = 0; m < cfg.metrics.size(); ++m)
        cells.push_back({experiment, f, m});
    std::vector<std::optional<std::map<std::string, double>>> cell_distances(cells.size());
    std::mutex warn_mutex;
    parallel_for(cells.size(), cfg.workers, [&](size_t i) {
      const auto& cell = cells[i];
      const auto& feats = features.at(feature_labels[cell.feature_idx]);
      std::map<std::string, double> slot;
      try {
        for (const auto& g : groups)
          slot[g.key()] =
              group_mean_distance(g, feats, img_to_obj, cfg.metrics[cell.metric_idx]);
      } catch (const Error& e) {
        if (e.code() != Errc::zero_vector_cosine) throw;
        std::lock_guard<std::mutex> lock(warn_mutex);
        std::cerr << "warning: " << exp_name << "/" << feature_labels[cell.feature_idx] << "/"
                  << cfg.metrics[cell.metric_idx].token() << ": " << e.what()
                  << "; cell skipped\n";
        return;
      }
      cell_distances[i] = std::move(slot);
    });

    json exp_json = json::object();
    for (const auto& [platform, acc] : platform_acc) {
      json platform_json = json::object();
      struct Best {
        double abs_rho = -1.0;
        CorrelationReport report;
      } best;
      for (size_t i = 0; i < cells.size(); ++i) {
        if (!cell_distances[i].has_value()) continue;
        const auto& cell = cells[i];
        const auto& feature = feature_labels[cell.feature_idx];
        const auto metric = cfg.metrics[cell.metric_idx].token();
        std::vector<GroupResult> rows;
        for (const auto& [key, dist] : *cell_distances[i]) {
          GroupResult row;
          row.key = key;
          row.mean_distance = dist;
          row.mean_accuracy = acc.at(key).first;
          row.member_count = acc.at(key).second;
          rows.push_back(std::move(row));
        }
        CorrelationReport rep;
        try {
          rep = correlate_experiment(exp_name, platform, feature, metric, std::move(rows));
        } catch (const Error& e) {
          if (e.code() != Errc::constant_series && e.code() != Errc::too_few) throw;
          std::cerr << "warning: " << exp_name << "/" << platform << "/" << feature << "/"
                    << metric << ": " << e.what() << "; cell skipped\n";
          continue;
        }
        platform_json[feature][metric] = {
            {"rho", rep.rho}, {"abs_rho", rep.abs_rho}, {"n", rep.n_groups}};
        if (rep.abs_rho > best.abs_rho) {
          best.abs_rho = rep.abs_rho;
          best.report = rep;
        }
      }
      if (platform_json.empty()) continue;
      exp_json[platform] = platform_json;

      // Table-1-shaped summary: features as rows, metrics as columns
      const auto summary_path =
          cfg.out_dir / ("summary_" + exp_name + "_" + sanitize(platform) + ".csv");
      std::ofstream csv(summary_path);
      require(csv.good(), Errc::io_error, "cannot write " + summary_path.string());
      csv << "feature";
      for (const auto& m : cfg.metrics) csv << "," << m.token();
      csv << "\n";
      for (const auto& feature : feature_labels) {
        csv << feature;
        for (const auto& m : cfg.metrics) {
          csv << ",";
          if (platform_json.contains(feature) && platform_json[feature].contains(m.token())) {
            std::ostringstream v;
            v.precision(6);
            v << platform_json[feature][m.token()]["abs_rho"].get<double>();
            csv << v.str();
          }
        }
        csv << "\n";
      }
      outputs.summary_csv.push_back(summary_path);

      if (best.abs_rho >= 0.0) {
        const auto stem = cfg.out_dir / ("scatter_" + exp_name + "_" + sanitize(platform) +
                                         "_" + sanitize(best.report.feature) + "_" +
                                         sanitize(best.report.metric));
        scatter_export(best.report, stem);
        outputs.scatter_stems.push_back(stem);
      }
    }
    if (!exp_json.empty()) report_experiments[exp_name] = exp_json;
  }

  json report = {{"experiments", report_experiments}};
  outputs.report_json = cfg.out_dir / "report.json";
  std::ofstream out(outputs.report_json);
  require(out.good(), Errc::io_error, "cannot write " + outputs.report_json.string());
  out << report.dump(2) << "\n";
  require(out.good(), Errc::io_error, "write failed for " + outputs.report_json.string());
  return outputs;
}

std::string render_report(const std::filesystem::path& report_json) {
  std::ifstream in(report_json);
  require(in.good(), Errc::io_error, "cannot open " + report_json.string());
  json report;
  try {
    in >> report;
  } catch (const json::exception& e) {
    fail(Errc::parse_error, report_json.string() + ": " + e.what());
  }
  std::ostringstream os;
  os.precision(4);
  for (const auto& [exp, platforms] : report.at("experiments").items()) {
    for (const auto& [platform, features] : platforms.items()) {
      os << exp << " experiment, platform " << platform << " (abs rho; signed in parens)\n";
      for (const auto& [feature, metrics] : features.items()) {
        os << "  " << feature << ":";
        for (const auto& [metric, cell] : metrics.items())
          os << "  " << metric << "=" << cell.at("abs_rho").get<double>() << " ("
             << cell.at("rho").get<double>() << ")";
        os << "\n";
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace percept
