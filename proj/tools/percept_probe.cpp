#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "percept/codec.hpp"
#include "percept/config.hpp"
#include "percept/error.hpp"
#include "percept/pipeline.hpp"
#include "percept/synth.hpp"

namespace fs = std::filesystem;
using namespace percept;

namespace {

struct SharedOptions {
  std::string config_path;
  std::string manifest;
  std::vector<std::string> features;
  std::vector<std::string> metrics;
  double minkowski_p = 0.0;  // 0 = unset
  std::vector<std::string> experiments;
  std::vector<std::string> platforms;
  std::vector<std::string> predictions;
  std::string out;
  int workers = -1;  // -1 = unset
  int64_t seed = -1;
  std::string reference_device;
};

void add_shared(CLI::App* cmd, SharedOptions& o) {
  cmd->add_option("--config", o.config_path, "config file (key = value with [tables])");
  cmd->add_option("--manifest", o.manifest, "dataset manifest CSV");
  cmd->add_option("--features", o.features,
                  "feature methods (color,daisy,edge,gabor,hog) or label=store.emb mappings")
      ->delimiter(',');
  cmd->add_option("--metrics", o.metrics,
                  "metric tokens: l1,l2,l2sq,sad,ssad,canberra,chebyshev,minkowski[:p],"
                  "braycurtis,cosine")
      ->delimiter(',');
  cmd->add_option("--minkowski-p", o.minkowski_p, "order for the minkowski metric");
  cmd->add_option("--experiments", o.experiments, "background and/or orientation")
      ->delimiter(',');
  cmd->add_option("--platforms", o.platforms, "platforms to report")->delimiter(',');
  cmd->add_option("--predictions", o.predictions, "prediction JSONL replay files")
      ->delimiter(',');
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--workers", o.workers, "worker count (1 = sequential, 0 = all cores)");
  cmd->add_option("--seed", o.seed, "global seed");
  cmd->add_option("--reference-device", o.reference_device,
                  "device of the reference configuration");
}

// config file first, flags win
RunConfig assemble_run_config(const SharedOptions& o) {
  ConfigFile file;
  if (!o.config_path.empty()) file = ConfigFile::parse_file(o.config_path);

  RunConfig cfg;
  cfg.manifest_path = !o.manifest.empty() ? o.manifest : file.get_string("run.manifest");
  cfg.out_dir = !o.out.empty() ? o.out : file.get_string("run.out", "percept_out");
  cfg.workers = o.workers >= 0 ? o.workers : static_cast<int>(file.get_int("run.workers", 0));
  cfg.seed = o.seed >= 0 ? static_cast<uint64_t>(o.seed)
                         : static_cast<uint64_t>(file.get_int("run.seed", 0));
  cfg.grouping.reference_device = !o.reference_device.empty()
                                      ? o.reference_device
                                      : file.get_string("run.reference_device",
                                                        kDefaultReferenceDevice);

  auto features = !o.features.empty() ? o.features : file.get_list("run.features");
  for (const auto& token : features) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      const auto method = parse_method(token);
      require(is_native_method(method), Errc::bad_config,
              "feature '" + token + "' needs a store mapping (use " + token + "=path.emb)");
      cfg.native_features.push_back(method);
    } else {
      cfg.embedding_stores.emplace_back(token.substr(0, eq), token.substr(eq + 1));
    }
  }

  const double p = o.minkowski_p > 0.0 ? o.minkowski_p : file.get_number("run.minkowski_p", 3.0);
  auto metrics = !o.metrics.empty() ? o.metrics : file.get_list("run.metrics");
  for (const auto& token : metrics) {
    auto spec = DistanceSpec::parse(token);
    if (spec.kind == DistanceKind::Minkowski && token.find(':') == std::string::npos)
      spec.p = p;
    cfg.metrics.push_back(spec);
  }

  auto experiments = !o.experiments.empty() ? o.experiments : file.get_list("run.experiments");
  if (!experiments.empty()) {
    cfg.experiments.clear();
    for (const auto& token : experiments) cfg.experiments.push_back(parse_experiment(token));
  }

  cfg.platforms = !o.platforms.empty() ? o.platforms : file.get_list("run.platforms");
  auto predictions = !o.predictions.empty() ? o.predictions : file.get_list("run.predictions");
  for (const auto& p_file : predictions) cfg.prediction_files.emplace_back(p_file);

  cfg.extractor.color.bins_per_channel =
      static_cast<int>(file.get_int("extractor.color_bins", 32));
  cfg.extractor.edge.grid = static_cast<int>(file.get_int("extractor.edge_grid", 4));
  cfg.extractor.hog.cell = static_cast<int>(file.get_int("extractor.hog_cell", 8));
  cfg.extractor.daisy.step = static_cast<int>(file.get_int("extractor.daisy_step", 16));

  if (file.has("endpoint.url_template")) {
    EndpointDescriptor e;
    e.url_template = file.get_string("endpoint.url_template");
    e.auth_header = file.get_string("endpoint.auth_header");
    e.auth_value_env = file.get_string("endpoint.auth_value_env");
    e.platform = file.get_string("endpoint.platform", "remote");
    e.max_in_flight = static_cast<int>(file.get_int("endpoint.max_in_flight", 4));
    e.timeout_ms = static_cast<int>(file.get_int("endpoint.timeout_ms", 10000));
    cfg.endpoint = e;
  }
  return cfg;
}

int run_synthesize(const SharedOptions& o, int objects, int image_size,
                   const std::string& platform) {
  SynthConfig cfg;
  cfg.out_dir = o.out.empty() ? "synth_corpus" : o.out;
  cfg.seed = o.seed >= 0 ? static_cast<uint64_t>(o.seed) : 7;
  cfg.objects = objects;
  cfg.image_size = image_size;
  cfg.platform = platform;
  const auto corpus = synthesize_corpus(cfg);
  std::cout << "wrote " << corpus.entries.size() << " images under "
            << corpus.images_dir.string() << "\n"
            << "manifest:    " << corpus.manifest_path.string() << "\n"
            << "predictions: " << corpus.predictions_path.string() << "\n";
  return 0;
}

int run_simulate(const SharedOptions& o, const std::vector<std::string>& kinds,
                 const std::vector<int>& levels) {
  require(!o.manifest.empty(), Errc::bad_config, "--manifest is required");
  require(!o.out.empty(), Errc::bad_config, "--out is required");
  const fs::path out_dir = o.out;
  const fs::path images_dir = out_dir / "images";
  fs::create_directories(images_dir);

  std::vector<ChallengeKind> challenge_kinds;
  if (kinds.empty())
    challenge_kinds = {ChallengeKind::Underexposure, ChallengeKind::Overexposure,
                       ChallengeKind::GaussianBlur,  ChallengeKind::Contrast,
                       ChallengeKind::DirtyLens,     ChallengeKind::SaltPepper,
                       ChallengeKind::Resize};
  else
    for (const auto& k : kinds) challenge_kinds.push_back(parse_challenge(k));
  std::vector<int> challenge_levels = levels;
  if (challenge_levels.empty()) challenge_levels = {1, 2, 3, 4, 5};
  for (int lvl : challenge_levels)
    require(lvl >= 1 && lvl <= 5, Errc::bad_level, "levels must be in 1..5");

  const auto entries = read_manifest(o.manifest);
  std::vector<ManifestEntry> all_rows = entries;
  size_t emitted = 0;
  for (const auto& e : entries) {
    if (!e.challenge_free()) continue;
    const Image original = load_image(e.path);
    for (const auto kind : challenge_kinds) {
      for (const int level : challenge_levels) {
        ChallengeSpec spec;
        spec.kind = kind;
        spec.level = level;
        spec.seed = default_challenge_seed(e.image_id, kind, level);
        ManifestEntry row = e;
        row.image_id = e.image_id + "__" + challenge_name(kind) + "_" + std::to_string(level);
        row.path = images_dir / (row.image_id + ".png");
        row.challenge = spec;
        save_png(row.path, apply_challenge(original, spec));
        all_rows.push_back(std::move(row));
        ++emitted;
      }
    }
  }
  const fs::path manifest_out = out_dir / "manifest.csv";
  write_manifest(manifest_out, all_rows);
  std::cout << "wrote " << emitted << " challenged images; manifest: "
            << manifest_out.string() << "\n";
  return 0;
}

int run_fetch(const SharedOptions& o, const std::string& url, const std::string& auth_header,
              const std::string& auth_env, const std::string& platform,
              const std::string& cache) {
  RunConfig cfg = assemble_run_config(o);
  EndpointDescriptor endpoint;
  if (cfg.endpoint.has_value()) endpoint = *cfg.endpoint;
  if (!url.empty()) endpoint.url_template = url;
  if (!auth_header.empty()) endpoint.auth_header = auth_header;
  if (!auth_env.empty()) endpoint.auth_value_env = auth_env;
  if (!platform.empty()) endpoint.platform = platform;
  require(!endpoint.url_template.empty(), Errc::bad_config,
          "an endpoint url template is required (flag --url or [endpoint] in config)");
  require(!cfg.manifest_path.empty() && fs::exists(cfg.manifest_path), Errc::bad_config,
          "manifest is required");

  fs::create_directories(cfg.out_dir);
  const fs::path cache_path =
      !cache.empty() ? fs::path(cache)
                     : cfg.out_dir / ("predictions_" + endpoint.platform + ".jsonl");
  std::vector<std::pair<std::string, fs::path>> images;
  for (const auto& e : read_manifest(cfg.manifest_path)) images.emplace_back(e.image_id, e.path);
  const auto records = fetch_predictions(endpoint, images, cache_path);
  std::cout << records.size() << " prediction records available in " << cache_path.string()
            << "\n";
  return 0;
}

int dispatch(const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return (e.code() == Errc::bad_config || e.code() == Errc::parse_error) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"feature-similarity probe for recognition robustness"};
  app.require_subcommand(1);

  SharedOptions opts;

  auto* synthesize = app.add_subcommand(
      "synthesize", "generate the synthetic desk-scale corpus and mock predictions");
  int objects = 10, image_size = 128;
  std::string synth_platform = "mock";
  add_shared(synthesize, opts);
  synthesize->add_option("--objects", objects, "number of synthetic objects");
  synthesize->add_option("--size", image_size, "source image side in pixels");
  synthesize->add_option("--platform", synth_platform, "platform tag for mock predictions");

  auto* simulate =
      app.add_subcommand("simulate", "render challenge-degraded copies of a corpus");
  std::vector<std::string> kinds;
  std::vector<int> levels;
  add_shared(simulate, opts);
  simulate->add_option("--kinds", kinds, "challenge kinds (default: all seven)")
      ->delimiter(',');
  simulate->add_option("--levels", levels, "severity levels (default: 1..5)")->delimiter(',');

  auto* extract_cmd =
      app.add_subcommand("extract", "compute native features into embedding stores");
  add_shared(extract_cmd, opts);

  auto* fetch_cmd = app.add_subcommand("fetch", "fetch predictions via a REST endpoint");
  std::string url, auth_header, auth_env, fetch_platform, cache;
  add_shared(fetch_cmd, opts);
  fetch_cmd->add_option("--url", url, "url template with {image} slot");
  fetch_cmd->add_option("--auth-header", auth_header, "auth header name");
  fetch_cmd->add_option("--auth-env", auth_env, "env var holding the auth value");
  fetch_cmd->add_option("--platform", fetch_platform, "platform tag");
  fetch_cmd->add_option("--cache", cache, "prediction cache JSONL");

  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "correlate group feature distances with recognition accuracy");
  add_shared(evaluate_cmd, opts);

  auto* report_cmd = app.add_subcommand("report", "print a report JSON as a table");
  std::string report_path = "report.json";
  report_cmd->add_option("--report", report_path, "path to report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (synthesize->parsed())
    return dispatch([&] { return run_synthesize(opts, objects, image_size, synth_platform); });
  if (simulate->parsed()) return dispatch([&] { return run_simulate(opts, kinds, levels); });
  if (extract_cmd->parsed())
    return dispatch([&] {
      extract_features(assemble_run_config(opts));
      std::cout << "feature stores up to date\n";
      return 0;
    });
  if (fetch_cmd->parsed())
    return dispatch(
        [&] { return run_fetch(opts, url, auth_header, auth_env, fetch_platform, cache); });
  if (evaluate_cmd->parsed())
    return dispatch([&] {
      const auto outputs = evaluate(assemble_run_config(opts));
      std::cout << "report: " << outputs.report_json.string() << "\n";
      for (const auto& s : outputs.summary_csv) std::cout << "summary: " << s.string() << "\n";
      std::cout << render_report(outputs.report_json);
      return 0;
    });
  if (report_cmd->parsed())
    return dispatch([&] {
      std::cout << render_report(report_path);
      return 0;
    });
  return 1;
}
