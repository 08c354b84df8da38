#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "percept/codec.hpp"
#include "percept/config.hpp"
#include "percept/embedding_store.hpp"
#include "percept/pipeline.hpp"
#include "percept/synth.hpp"
#include "test_support.hpp"

using namespace percept;
using testing::TempDir;

namespace {

SynthCorpus small_corpus(const std::filesystem::path& dir, uint64_t seed = 7) {
  SynthConfig cfg;
  cfg.out_dir = dir;
  cfg.seed = seed;
  cfg.objects = 2;
  cfg.image_size = 48;
  return synthesize_corpus(cfg);
}

RunConfig base_config(const SynthCorpus& corpus, const std::filesystem::path& out) {
  RunConfig cfg;
  cfg.manifest_path = corpus.manifest_path;
  cfg.native_features = {FeatureMethod::Color, FeatureMethod::Edge};
  cfg.metrics = {DistanceSpec::parse("l2"), DistanceSpec::parse("cosine")};
  cfg.platforms = {"mock"};
  cfg.prediction_files = {corpus.predictions_path};
  cfg.out_dir = out;
  cfg.workers = 2;
  return cfg;
}

}  // namespace

TEST_CASE("config files parse tables, arrays, and scalars") {
  const auto cfg = ConfigFile::parse(
      "# comment\n"
      "top = 3\n"
      "[run]\n"
      "manifest = \"data/manifest.csv\"  # trailing comment\n"
      "features = [color, edge]\n"
      "workers = 4\n"
      "flag = true\n"
      "[endpoint]\n"
      "url_template = \"http://x/{image}\"\n");
  CHECK(cfg.get_int("top", 0) == 3);
  CHECK(cfg.get_string("run.manifest") == "data/manifest.csv");
  CHECK(cfg.get_list("run.features") == std::vector<std::string>{"color", "edge"});
  CHECK(cfg.get_int("run.workers", 0) == 4);
  CHECK(cfg.get_bool("run.flag", false));
  CHECK(cfg.get_string("endpoint.url_template") == "http://x/{image}");
  CHECK(cfg.get_string("absent", "fallback") == "fallback");
  CHECK_THROWS_CODE(ConfigFile::parse("key"), Errc::bad_config);
  CHECK_THROWS_CODE(ConfigFile::parse("[unclosed\n"), Errc::bad_config);
}

TEST_CASE("extract writes stores, resumes, and reports bad paths with the image id") {
  TempDir dir("extract");
  const auto corpus = small_corpus(dir.path() / "corpus");
  RunConfig cfg = base_config(corpus, dir.path() / "out");
  extract_features(cfg);

  const auto color_store = feature_store_path(cfg.out_dir, "color");
  REQUIRE(std::filesystem::exists(color_store));
  const auto store = EmbeddingStore::open(color_store, "color");
  CHECK(store.size() == corpus.entries.size());
  CHECK(store.dim() == 96);

  // warm rerun leaves the store untouched
  const auto stamp = std::filesystem::last_write_time(color_store);
  extract_features(cfg);
  CHECK(std::filesystem::last_write_time(color_store) == stamp);

  // a missing image fails with the offending id in the message
  auto entries = read_manifest(corpus.manifest_path);
  entries.front().path = dir.path() / "gone.png";
  entries.front().image_id = "gone_image";
  write_manifest(corpus.manifest_path, entries);
  std::filesystem::remove(color_store);
  try {
    extract_features(cfg);
    FAIL("expected extraction to fail");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("gone_image") != std::string::npos);
  }
}

TEST_CASE("evaluate produces the report, summaries, and scatters") {
  TempDir dir("evaluate");
  const auto corpus = small_corpus(dir.path() / "corpus");
  RunConfig cfg = base_config(corpus, dir.path() / "out");
  extract_features(cfg);
  const auto outputs = evaluate(cfg);

  REQUIRE(std::filesystem::exists(outputs.report_json));
  std::ifstream in(outputs.report_json);
  nlohmann::json report;
  in >> report;
  const auto& experiments = report.at("experiments");
  REQUIRE(experiments.contains("background"));
  REQUIRE(experiments.contains("orientation"));
  const auto& cell = experiments["background"]["mock"]["color"]["l2"];
  CHECK(cell.at("n").get<int>() == 25);
  CHECK(std::abs(cell.at("rho").get<double>()) <= 1.0);
  CHECK(cell.at("abs_rho").get<double>() ==
        doctest::Approx(std::abs(cell.at("rho").get<double>())));
  CHECK(experiments["orientation"]["mock"]["edge"]["l2"].at("n").get<int>() == 15);

  // summary CSV: one row per feature, one column per metric
  REQUIRE(!outputs.summary_csv.empty());
  std::ifstream csv(outputs.summary_csv.front());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "feature,l2,cosine");
  size_t rows = 0;
  std::string line;
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);

  REQUIRE(!outputs.scatter_stems.empty());
  for (const auto& stem : outputs.scatter_stems) {
    CHECK(std::filesystem::exists(stem.string() + ".csv"));
    CHECK(std::filesystem::exists(stem.string() + ".svg"));
  }

  // the render helper summarizes every cell
  const auto text = render_report(outputs.report_json);
  CHECK(text.find("background experiment") != std::string::npos);
  CHECK(text.find("color") != std::string::npos);
}

TEST_CASE("evaluate is byte-identical across worker counts") {
  TempDir dir("determinism");
  const auto corpus = small_corpus(dir.path() / "corpus");

  RunConfig cfg1 = base_config(corpus, dir.path() / "out1");
  cfg1.workers = 1;
  extract_features(cfg1);
  const auto out1 = evaluate(cfg1);

  RunConfig cfg8 = base_config(corpus, dir.path() / "out8");
  cfg8.workers = 8;
  extract_features(cfg8);
  const auto out8 = evaluate(cfg8);

  CHECK(read_file(out1.report_json) == read_file(out8.report_json));
  // feature stores байt-match too: extraction order is manifest order
  CHECK(read_file(feature_store_path(cfg1.out_dir, "color")) ==
        read_file(feature_store_path(cfg8.out_dir, "color")));
}

TEST_CASE("evaluate tolerates a platform without predictions") {
  TempDir dir("partial");
  const auto corpus = small_corpus(dir.path() / "corpus");
  RunConfig cfg = base_config(corpus, dir.path() / "out");
  cfg.platforms = {"mock", "absent_platform"};
  extract_features(cfg);
  const auto outputs = evaluate(cfg);
  std::ifstream in(outputs.report_json);
  nlohmann::json report;
  in >> report;
  CHECK(report["experiments"]["background"].contains("mock"));
  CHECK_FALSE(report["experiments"]["background"].contains("absent_platform"));
}

TEST_CASE("evaluate consumes ingested embedding stores") {
  TempDir dir("ingest");
  const auto corpus = small_corpus(dir.path() / "corpus");

  // fabricate an external store keyed by severity so it correlates
  const auto store_path = dir.path() / "deep.emb";
  {
    EmbeddingStoreWriter writer(store_path, 3);
    for (const auto& e : corpus.entries) {
      const double bg = background_severity(e.background);
      const double pose = orientation_severity(e.orientation);
      writer.append(e.image_id, {bg, pose, 1.0});
    }
    writer.finalize();
  }

  RunConfig cfg = base_config(corpus, dir.path() / "out");
  cfg.native_features = {};
  cfg.embedding_stores = {{"vgg16", store_path}};
  const auto outputs = evaluate(cfg);
  std::ifstream in(outputs.report_json);
  nlohmann::json report;
  in >> report;
  const double rho =
      report["experiments"]["background"]["mock"]["vgg16"]["l2"]["abs_rho"].get<double>();
  CHECK(rho > 0.5);  // severity-keyed vectors must correlate strongly
}

TEST_CASE("validation rejects broken configs") {
  TempDir dir("badcfg");
  RunConfig cfg;
  cfg.out_dir = dir.path();
  cfg.metrics = {DistanceSpec::parse("l2")};
  cfg.native_features = {FeatureMethod::Color};
  cfg.manifest_path = dir.path() / "missing.csv";
  CHECK_THROWS_CODE(cfg.validate(), Errc::bad_config);

  const auto corpus = small_corpus(dir.path() / "corpus");
  cfg.manifest_path = corpus.manifest_path;
  cfg.metrics.clear();
  CHECK_THROWS_CODE(cfg.validate(), Errc::bad_config);
  cfg.metrics = {DistanceSpec::parse("l2")};
  cfg.native_features = {FeatureMethod::VGG16};
  CHECK_THROWS_CODE(cfg.validate(), Errc::bad_config);
}
