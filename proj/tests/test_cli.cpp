#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "percept/codec.hpp"
#include "percept/embedding_store.hpp"
#include "percept/manifest.hpp"
#include "test_support.hpp"

using namespace percept;
using testing::TempDir;

namespace {

const std::string kBin = PERCEPT_PROBE_BIN;

int run_cli(const std::string& args, const std::filesystem::path& stdout_file = {}) {
  std::string cmd = kBin + " " + args;
  if (!stdout_file.empty())
    cmd += " > " + stdout_file.string() + " 2>/dev/null";
  else
    cmd += " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

size_t line_count(const std::filesystem::path& path) {
  std::ifstream in(path);
  size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("cli drives the whole pipeline") {
  TempDir dir("cli");
  const auto corpus = (dir.path() / "corpus").string();
  const auto out = (dir.path() / "out").string();

  REQUIRE(run_cli("synthesize --objects 2 --size 48 --seed 9 --out " + corpus) == 0);
  const auto manifest = dir.path() / "corpus" / "manifest.csv";
  REQUIRE(std::filesystem::exists(manifest));
  CHECK(read_manifest(manifest).size() == 250);

  // same seed regenerates identical predictions
  const auto preds = dir.path() / "corpus" / "predictions_mock.jsonl";
  const auto first = read_file(preds);
  REQUIRE(run_cli("synthesize --objects 2 --size 48 --seed 9 --out " + corpus) == 0);
  CHECK(read_file(preds) == first);

  REQUIRE(run_cli("extract --manifest " + manifest.string() +
                  " --features color,edge --metrics l2 --out " + out) == 0);
  const auto store = EmbeddingStore::open(dir.path() / "out" / "features_color.emb", "color");
  CHECK(store.size() == 250);

  const auto eval_log = dir.path() / "eval.txt";
  REQUIRE(run_cli("evaluate --manifest " + manifest.string() +
                      " --features color,edge --metrics l2,cosine --predictions " +
                      preds.string() + " --platforms mock --out " + out,
                  eval_log) == 0);
  CHECK(std::filesystem::exists(dir.path() / "out" / "report.json"));
  CHECK(slurp(eval_log).find("background experiment") != std::string::npos);

  const auto report_log = dir.path() / "report.txt";
  REQUIRE(run_cli("report --report " + (dir.path() / "out" / "report.json").string(),
                  report_log) == 0);
  CHECK(slurp(report_log).find("orientation experiment") != std::string::npos);

  // identical config and seed reproduce the report byte for byte at any
  // worker count
  const auto out_seq = (dir.path() / "out_seq").string();
  const auto out_par = (dir.path() / "out_par").string();
  const std::string eval_args = "--manifest " + manifest.string() +
                                " --features color,edge --metrics l2,cosine --predictions " +
                                preds.string() + " --platforms mock --seed 9";
  REQUIRE(run_cli("extract " + eval_args + " --workers 1 --out " + out_seq) == 0);
  REQUIRE(run_cli("evaluate " + eval_args + " --workers 1 --out " + out_seq) == 0);
  REQUIRE(run_cli("extract " + eval_args + " --workers 8 --out " + out_par) == 0);
  REQUIRE(run_cli("evaluate " + eval_args + " --workers 8 --out " + out_par) == 0);
  CHECK(read_file(dir.path() / "out_seq" / "report.json") ==
        read_file(dir.path() / "out_par" / "report.json"));
}

TEST_CASE("cli simulate emits challenged copies and an augmented manifest") {
  TempDir dir("cli_sim");
  const auto corpus = (dir.path() / "corpus").string();
  REQUIRE(run_cli("synthesize --objects 1 --size 48 --seed 4 --out " + corpus) == 0);
  const auto manifest = dir.path() / "corpus" / "manifest.csv";

  const auto challenged = (dir.path() / "challenged").string();
  REQUIRE(run_cli("simulate --manifest " + manifest.string() +
                  " --kinds gaussian_blur,salt_pepper --levels 2,4 --out " + challenged) == 0);
  const auto out_manifest = dir.path() / "challenged" / "manifest.csv";
  // 125 originals + 125 * 2 kinds * 2 levels challenge rows, plus header
  CHECK(line_count(out_manifest) == 1 + 125 + 125 * 4);

  const auto rows = read_manifest(out_manifest);
  size_t challenged_rows = 0;
  for (const auto& e : rows) {
    if (e.challenge_free()) continue;
    ++challenged_rows;
    CHECK(std::filesystem::exists(e.path));
    CHECK(e.image_id.find("__") != std::string::npos);
  }
  CHECK(challenged_rows == 500);
  // the input manifest was not touched
  CHECK(line_count(manifest) == 1 + 125);
}

TEST_CASE("cli restricts the sweep to the selected experiments") {
  TempDir dir("cli_exp");
  const auto corpus = (dir.path() / "corpus").string();
  REQUIRE(run_cli("synthesize --objects 1 --size 48 --seed 8 --out " + corpus) == 0);
  const auto manifest = dir.path() / "corpus" / "manifest.csv";
  const auto preds = dir.path() / "corpus" / "predictions_mock.jsonl";
  const auto out = (dir.path() / "out").string();
  REQUIRE(run_cli("extract --manifest " + manifest.string() + " --features color --metrics l2 --out " + out) == 0);
  REQUIRE(run_cli("evaluate --manifest " + manifest.string() +
                  " --features color --metrics l2 --experiments background --predictions " +
                  preds.string() + " --out " + out) == 0);
  const auto report = slurp(dir.path() / "out" / "report.json");
  CHECK(report.find("background") != std::string::npos);
  CHECK(report.find("orientation") == std::string::npos);
}

TEST_CASE("cli extracts the heavyweight feature families too") {
  TempDir dir("cli_heavy");
  const auto corpus = (dir.path() / "corpus").string();
  REQUIRE(run_cli("synthesize --objects 1 --size 48 --seed 2 --out " + corpus) == 0);
  // trim the manifest to its first three rows to keep gabor/daisy quick
  const auto manifest = dir.path() / "corpus" / "manifest.csv";
  auto rows = read_manifest(manifest);
  rows.resize(3);
  const auto small_manifest = dir.path() / "small.csv";
  write_manifest(small_manifest, rows);

  const auto out = (dir.path() / "out").string();
  REQUIRE(run_cli("extract --manifest " + small_manifest.string() +
                  " --features gabor,daisy --metrics l2 --out " + out) == 0);
  const auto gabor = EmbeddingStore::open(dir.path() / "out" / "features_gabor.emb", "gabor");
  CHECK(gabor.size() == 3);
  CHECK(gabor.dim() == 48);
  const auto daisy = EmbeddingStore::open(dir.path() / "out" / "features_daisy.emb", "daisy");
  CHECK(daisy.size() == 3);
  CHECK(daisy.dim() == 200);
}

TEST_CASE("cli exit codes distinguish validation from runtime failures") {
  TempDir dir("cli_codes");
  // validation: missing manifest
  CHECK(run_cli("evaluate --manifest " + (dir.path() / "absent.csv").string() +
                " --features color --metrics l2 --out " + dir.path().string()) == 1);
  // validation: parse failure
  CHECK(run_cli("nonsense-command") == 1);
  CHECK(run_cli("--help") == 0);

  // runtime: manifest exists but feature stores were never extracted
  const auto corpus = (dir.path() / "corpus").string();
  REQUIRE(run_cli("synthesize --objects 1 --size 48 --seed 5 --out " + corpus) == 0);
  const auto manifest = dir.path() / "corpus" / "manifest.csv";
  const auto preds = dir.path() / "corpus" / "predictions_mock.jsonl";
  CHECK(run_cli("evaluate --manifest " + manifest.string() +
                " --features color --metrics l2 --predictions " + preds.string() +
                " --out " + (dir.path() / "fresh").string()) == 2);
}

TEST_CASE("cli honors config files with flag overrides") {
  TempDir dir("cli_config");
  const auto corpus = (dir.path() / "corpus").string();
  REQUIRE(run_cli("synthesize --objects 1 --size 48 --seed 6 --out " + corpus) == 0);
  const auto manifest = dir.path() / "corpus" / "manifest.csv";
  const auto preds = dir.path() / "corpus" / "predictions_mock.jsonl";

  const auto config = dir.path() / "run.conf";
  {
    std::ofstream out(config);
    out << "[run]\n"
        << "manifest = \"" << manifest.string() << "\"\n"
        << "out = \"" << (dir.path() / "out").string() << "\"\n"
        << "features = [color]\n"
        << "metrics = [l2, minkowski]\n"
        << "minkowski_p = 4\n"
        << "platforms = [mock]\n"
        << "predictions = [\"" << preds.string() << "\"]\n";
  }
  REQUIRE(run_cli("extract --config " + config.string()) == 0);
  const auto eval_log = dir.path() / "eval.txt";
  REQUIRE(run_cli("evaluate --config " + config.string(), eval_log) == 0);
  // the configured Minkowski order shows up in the rendered table
  CHECK(slurp(eval_log).find("minkowski:4") != std::string::npos);

  // flags beat the config: restrict metrics to cosine only
  REQUIRE(run_cli("evaluate --config " + config.string() + " --metrics cosine", eval_log) == 0);
  CHECK(slurp(eval_log).find("minkowski") == std::string::npos);
  CHECK(slurp(eval_log).find("cosine") != std::string::npos);
}
