#include "percept/recognition.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "percept/codec.hpp"
#include "percept/error.hpp"

// httplib is header-heavy; keep it out of recognition.hpp
#include <httplib.h>

namespace percept {

using nlohmann::json;

void PredictionRecord::validate() const {
  require(!image_id.empty(), Errc::invariant_violation, "empty image_id");
  require(!labels.empty(), Errc::invariant_violation, "record has no labels");
  std::set<std::string> seen;
  double prev = 1.0;
  for (const auto& ls : labels) {
    require(ls.confidence >= 0.0 && ls.confidence <= 1.0, Errc::invariant_violation,
            "confidence " + std::to_string(ls.confidence) + " outside [0,1]");
    require(ls.confidence <= prev + 1e-12, Errc::invariant_violation,
            "confidences not non-increasing");
    require(seen.insert(ls.label).second, Errc::invariant_violation,
            "duplicate label '" + ls.label + "'");
    prev = ls.confidence;
  }
}

void PredictionRecord::normalize() {
  std::stable_sort(labels.begin(), labels.end(),
                   [](const LabelScore& a, const LabelScore& b) {
                     return a.confidence > b.confidence;
                   });
  validate();
}

std::string fold_label(const std::string& label) {
  size_t b = 0, e = label.size();
  while (b < e && std::isspace(static_cast<unsigned char>(label[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(label[e - 1]))) --e;
  std::string out;
  out.reserve(e - b);
  for (size_t i = b; i < e; ++i)
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(label[i]))));
  return out;
}

ObjectLabelSet ObjectLabelSet::make(const std::string& object_id,
                                    const std::vector<std::string>& raw_aliases) {
  ObjectLabelSet set;
  set.object_id = object_id;
  for (const auto& a : raw_aliases) {
    auto folded = fold_label(a);
    if (!folded.empty()) set.aliases.insert(std::move(folded));
  }
  require(!set.aliases.empty(), Errc::invariant_violation,
          "object '" + object_id + "' has no usable aliases");
  return set;
}

bool top5_hit(const PredictionRecord& rec, const ObjectLabelSet& truth) {
  const size_t n = std::min<size_t>(5, rec.labels.size());
  for (size_t i = 0; i < n; ++i)
    if (truth.aliases.contains(fold_label(rec.labels[i].label))) return true;
  return false;
}

double top5_accuracy(const std::vector<PredictionRecord>& recs,
                     const std::map<std::string, ObjectLabelSet>& truths,
                     const std::map<std::string, std::string>& image_to_object) {
  require(!recs.empty(), Errc::empty_set, "no prediction records to score");
  size_t hits = 0;
  for (const auto& rec : recs) {
    auto obj_it = image_to_object.find(rec.image_id);
    require(obj_it != image_to_object.end(), Errc::unknown_object,
            "image '" + rec.image_id + "' maps to no object");
    auto truth_it = truths.find(obj_it->second);
    require(truth_it != truths.end(), Errc::unknown_object,
            "object '" + obj_it->second + "' has no label set");
    if (top5_hit(rec, truth_it->second)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(recs.size());
}

namespace {

// image_id/platform are optional here: endpoint responses carry labels only
// and the fetcher fills in the rest. validate() still rejects empty ids.
PredictionRecord record_from_json(const json& j) {
  PredictionRecord rec;
  rec.image_id = j.value("image_id", std::string{});
  rec.platform = j.value("platform", std::string{});
  for (const auto& l : j.at("labels")) {
    LabelScore ls;
    ls.label = l.at("label").get<std::string>();
    ls.confidence = l.at("confidence").get<double>();
    rec.labels.push_back(std::move(ls));
  }
  return rec;
}

json record_to_json(const PredictionRecord& rec) {
  json labels = json::array();
  for (const auto& ls : rec.labels) labels.push_back({{"label", ls.label}, {"confidence", ls.confidence}});
  return {{"image_id", rec.image_id}, {"platform", rec.platform}, {"labels", labels}};
}

}  // namespace

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open " + path.string());
  std::vector<PredictionRecord> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(Errc::parse_error, "line " + std::to_string(line_no) + ": " + e.what());
    }
    PredictionRecord rec;
    try {
      rec = record_from_json(j);
    } catch (const json::exception& e) {
      fail(Errc::parse_error, "line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      rec.normalize();
    } catch (const Error& e) {
      fail(Errc::invariant_violation, "line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void append_predictions(const std::filesystem::path& path,
                        const std::vector<PredictionRecord>& recs) {
  std::ofstream out(path, std::ios::app);
  require(out.good(), Errc::io_error, "cannot open " + path.string() + " for append");
  for (const auto& rec : recs) out << record_to_json(rec).dump() << "\n";
  require(out.good(), Errc::io_error, "append failed for " + path.string());
}

namespace {

// splits scheme://host[:port] from the path part
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  require(scheme_end != std::string::npos, Errc::bad_config, "endpoint url needs a scheme");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string substitute_image(const std::string& tmpl, const std::string& image_id) {
  const auto slot = tmpl.find("{image}");
  require(slot != std::string::npos, Errc::bad_config, "url template lacks {image} slot");
  return tmpl.substr(0, slot) + image_id + tmpl.substr(slot + 7);
}

}  // namespace

std::vector<PredictionRecord> fetch_predictions(
    const EndpointDescriptor& endpoint,
    const std::vector<std::pair<std::string, std::filesystem::path>>& images,
    const std::filesystem::path& cache_path) {
  // cache-first
  std::map<std::string, PredictionRecord> cached;
  if (std::filesystem::exists(cache_path)) {
    for (auto& rec : load_predictions(cache_path))
      if (rec.platform == endpoint.platform) cached.emplace(rec.image_id, std::move(rec));
  }

  std::vector<std::pair<std::string, std::filesystem::path>> missing;
  for (const auto& [id, path] : images)
    if (!cached.contains(id)) missing.emplace_back(id, path);

  if (!missing.empty()) {
    std::string auth_value;
    if (!endpoint.auth_header.empty()) {
      const char* secret = std::getenv(endpoint.auth_value_env.c_str());
      require(secret != nullptr, Errc::bad_config,
              "environment variable " + endpoint.auth_value_env + " is not set");
      auth_value = secret;
    }
    const auto [base, path_tmpl] = split_url(endpoint.url_template);

    std::mutex io_mutex;  // serializes cache appends and the cached map
    std::atomic<size_t> next{0};
    std::atomic<size_t> ok{0}, auth_denied{0}, failed{0};
    const size_t workers =
        std::min<size_t>(std::max(1, endpoint.max_in_flight), missing.size());

    auto worker = [&]() {
      httplib::Client client(base);
      client.set_connection_timeout(endpoint.timeout_ms / 1000,
                                    (endpoint.timeout_ms % 1000) * 1000);
      client.set_read_timeout(endpoint.timeout_ms / 1000, (endpoint.timeout_ms % 1000) * 1000);
      for (size_t i = next.fetch_add(1); i < missing.size(); i = next.fetch_add(1)) {
        const auto& [id, img_path] = missing[i];
        try {
          const auto body = read_file(img_path);
          httplib::Headers headers;
          if (!endpoint.auth_header.empty())
            headers.emplace(endpoint.auth_header, auth_value);
          auto res = client.Post(substitute_image(path_tmpl, id), headers,
                                 reinterpret_cast<const char*>(body.data()), body.size(),
                                 "application/octet-stream");
          if (!res) {
            ++failed;
            continue;
          }
          if (res->status == 401 || res->status == 403) {
            ++auth_denied;
            continue;
          }
          if (res->status != 200) {
            ++failed;
            continue;
          }
          PredictionRecord rec = record_from_json(json::parse(res->body));
          rec.image_id = id;
          rec.platform = endpoint.platform;
          rec.normalize();
          std::lock_guard<std::mutex> lock(io_mutex);
          append_predictions(cache_path, {rec});
          cached.emplace(id, std::move(rec));
          ++ok;
        } catch (const std::exception&) {
          ++failed;
        }
      }
    };

    std::vector<std::thread> pool;
    for (size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    if (ok == 0) {
      if (auth_denied == missing.size())
        fail(Errc::auth_rejected, "endpoint rejected credentials for every request");
      fail(Errc::endpoint_unreachable, "all " + std::to_string(missing.size()) +
                                           " requests to " + base + " failed");
    }
  }

  std::vector<PredictionRecord> out;
  out.reserve(cached.size());
  for (const auto& [id, path] : images) {
    auto it = cached.find(id);
    if (it != cached.end()) out.push_back(it->second);
  }
  return out;
}

}  // namespace percept
