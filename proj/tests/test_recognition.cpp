#include <doctest.h>

#include <atomic>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "percept/codec.hpp"
#include "percept/recognition.hpp"
#include "test_support.hpp"

using namespace percept;
using testing::TempDir;

namespace {

// keeps the listener joined even when an assertion throws mid-test
struct ServerGuard {
  httplib::Server& server;
  std::thread thread;
  ServerGuard(httplib::Server& s) : server(s), thread([&s] { s.listen_after_bind(); }) {
    while (!server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ~ServerGuard() {
    server.stop();
    thread.join();
  }
};

PredictionRecord make_record(const std::string& id, std::vector<std::string> labels) {
  PredictionRecord rec;
  rec.image_id = id;
  rec.platform = "mock";
  double conf = 0.9;
  for (auto& l : labels) {
    rec.labels.push_back({std::move(l), conf});
    conf -= 0.1;
  }
  return rec;
}

}  // namespace

TEST_CASE("top5 hit honors rank, aliases, and case folding") {
  const auto truth = ObjectLabelSet::make("mug", {"mug", "Coffee Mug"});
  CHECK(top5_hit(make_record("i", {"cup", "bottle", "mug", "table", "hand"}), truth));
  CHECK_FALSE(
      top5_hit(make_record("i", {"cup", "bottle", "plate", "table", "hand", "mug"}), truth));
  CHECK(top5_hit(make_record("i", {"Coffee Mug"}), truth));
  CHECK(top5_hit(make_record("i", {"  MUG  "}), truth));
  CHECK_FALSE(top5_hit(make_record("i", {"mugs"}), truth));
}

TEST_CASE("records with fewer than five labels score over what is present") {
  const auto truth = ObjectLabelSet::make("mug", {"mug"});
  CHECK(top5_hit(make_record("i", {"mug"}), truth));
  CHECK_FALSE(top5_hit(make_record("i", {"cup", "plate"}), truth));
}

TEST_CASE("top5 accuracy is hits over total") {
  std::map<std::string, ObjectLabelSet> truths;
  truths.emplace("mug", ObjectLabelSet::make("mug", {"mug"}));
  truths.emplace("pen", ObjectLabelSet::make("pen", {"pen"}));
  std::map<std::string, std::string> ids = {
      {"a", "mug"}, {"b", "mug"}, {"c", "pen"}, {"d", "pen"}};
  std::vector<PredictionRecord> recs = {
      make_record("a", {"mug"}),
      make_record("b", {"x", "mug"}),
      make_record("c", {"pen"}),
      make_record("d", {"x", "y", "z", "w", "v"}),
  };
  CHECK(top5_accuracy(recs, truths, ids) == doctest::Approx(0.75));
  recs.pop_back();
  CHECK(top5_accuracy(recs, truths, ids) == doctest::Approx(1.0));
  CHECK_THROWS_CODE(top5_accuracy({}, truths, ids), Errc::empty_set);
  CHECK_THROWS_CODE(top5_accuracy({make_record("zz", {"mug"})}, truths, ids),
                    Errc::unknown_object);
}

TEST_CASE("record invariants are enforced") {
  auto rec = make_record("i", {"a", "b"});
  CHECK_NOTHROW(rec.validate());

  auto dup = make_record("i", {"a", "a"});
  CHECK_THROWS_CODE(dup.validate(), Errc::invariant_violation);

  auto bad_conf = make_record("i", {"a"});
  bad_conf.labels[0].confidence = 1.3;
  CHECK_THROWS_CODE(bad_conf.validate(), Errc::invariant_violation);

  auto unsorted = make_record("i", {"a", "b"});
  std::swap(unsorted.labels[0].confidence, unsorted.labels[1].confidence);
  CHECK_THROWS_CODE(unsorted.validate(), Errc::invariant_violation);
  unsorted.normalize();  // re-sorts
  CHECK(unsorted.labels[0].label == "b");

  PredictionRecord empty;
  empty.image_id = "i";
  CHECK_THROWS_CODE(empty.validate(), Errc::invariant_violation);
}

TEST_CASE("top5 hit depends only on rank order") {
  const auto truth = ObjectLabelSet::make("mug", {"mug"});
  auto rec = make_record("i", {"cup", "mug", "plate"});
  const bool base = top5_hit(rec, truth);
  // squash confidences through a positive monotone map
  for (auto& ls : rec.labels) ls.confidence = 0.1 + 0.5 * ls.confidence * ls.confidence;
  rec.validate();
  CHECK(top5_hit(rec, truth) == base);
}

TEST_CASE("jsonl predictions load, sort, and reject bad lines") {
  TempDir dir("preds");
  const auto path = dir.path() / "preds.jsonl";
  {
    std::ofstream out(path);
    out << R"({"image_id":"a","platform":"mock","labels":[{"label":"x","confidence":0.2},{"label":"y","confidence":0.9}]})"
        << "\n";
    out << R"({"image_id":"b","platform":"mock","labels":[{"label":"z","confidence":0.5}]})"
        << "\n";
  }
  auto recs = load_predictions(path);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].labels[0].label == "y");  // re-sorted on load

  {
    std::ofstream out(path, std::ios::app);
    out << R"({"image_id":"c","platform":"mock","labels":[{"label":"w","confidence":1.3}]})"
        << "\n";
  }
  CHECK_THROWS_CODE(load_predictions(path), Errc::invariant_violation);

  const auto garbled = dir.path() / "bad.jsonl";
  std::ofstream bad(garbled);
  bad << "{not json}\n";
  bad.close();
  CHECK_THROWS_CODE(load_predictions(garbled), Errc::parse_error);
}

TEST_CASE("fetch is cache-first and appends new responses") {
  TempDir dir("fetch");
  // two fake image files
  Image px(2, 2, 3, 100);
  save_png(dir.path() / "a.png", px);
  save_png(dir.path() / "b.png", px);

  std::atomic<int> server_hits{0};
  httplib::Server server;
  server.Post(R"(/recognize/(.+))", [&](const httplib::Request& req, httplib::Response& res) {
    ++server_hits;
    nlohmann::json body;
    body["labels"] = nlohmann::json::array();
    body["labels"].push_back({{"label", "thing_" + req.matches[1].str()}, {"confidence", 0.8}});
    body["labels"].push_back({{"label", "other"}, {"confidence", 0.3}});
    res.set_content(body.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  ServerGuard guard(server);

  EndpointDescriptor endpoint;
  endpoint.url_template = "http://127.0.0.1:" + std::to_string(port) + "/recognize/{image}";
  endpoint.platform = "stub";
  const auto cache = dir.path() / "cache.jsonl";

  const std::vector<std::pair<std::string, std::filesystem::path>> images = {
      {"a", dir.path() / "a.png"}, {"b", dir.path() / "b.png"}};
  auto first = fetch_predictions(endpoint, images, cache);
  CHECK(first.size() == 2);
  CHECK(server_hits == 2);
  CHECK(first[0].labels[0].label == "thing_a");

  // warm cache: no new requests, identical records
  auto second = fetch_predictions(endpoint, images, cache);
  CHECK(server_hits == 2);
  REQUIRE(second.size() == 2);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(second[i].image_id == first[i].image_id);
    CHECK(second[i].labels[0].label == first[i].labels[0].label);
  }
}

TEST_CASE("auth rejection and unreachable endpoints raise") {
  TempDir dir("fetcherr");
  Image px(2, 2, 3, 100);
  save_png(dir.path() / "a.png", px);
  const std::vector<std::pair<std::string, std::filesystem::path>> images = {
      {"a", dir.path() / "a.png"}};

  httplib::Server server;
  server.Post(R"(/recognize/(.+))", [&](const httplib::Request&, httplib::Response& res) {
    res.status = 401;
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  {
    ServerGuard guard(server);
    EndpointDescriptor endpoint;
    endpoint.url_template = "http://127.0.0.1:" + std::to_string(port) + "/recognize/{image}";
    endpoint.platform = "stub";
    CHECK_THROWS_CODE(fetch_predictions(endpoint, images, dir.path() / "c1.jsonl"),
                      Errc::auth_rejected);
  }

  EndpointDescriptor dead;
  dead.url_template = "http://127.0.0.1:1/recognize/{image}";  // nothing listens there
  dead.platform = "stub";
  dead.timeout_ms = 500;
  CHECK_THROWS_CODE(fetch_predictions(dead, images, dir.path() / "c2.jsonl"),
                    Errc::endpoint_unreachable);
}
