#include <doctest.h>

#include <algorithm>
#include <set>

#include "percept/experiments.hpp"
#include "percept/rng.hpp"
#include "percept/synth.hpp"
#include "test_support.hpp"

using namespace percept;

namespace {

const std::vector<std::string> kDevices = {"nikon_d80", "logitech_c920", "iphone_6s",
                                           "htc_one_x", "lg_leon"};
const std::vector<Background> kBackgrounds = {Background::White, Background::Kitchen2D,
                                              Background::LivingRoom2D, Background::Office3D,
                                              Background::LivingRoom3D};
const std::vector<Orientation> kOrientations = {Orientation::Front, Orientation::Left,
                                                Orientation::Right, Orientation::Back,
                                                Orientation::Top};

// full 5x5x5 grid over `objects` objects, challenge-free
std::vector<ManifestEntry> full_grid(int objects) {
  std::vector<ManifestEntry> entries;
  for (int o = 0; o < objects; ++o) {
    const std::string obj = "obj" + std::to_string(o);
    for (const auto bg : kBackgrounds)
      for (const auto& dev : kDevices)
        for (const auto pose : kOrientations) {
          ManifestEntry e;
          e.object_id = obj;
          e.background = bg;
          e.device = dev;
          e.orientation = pose;
          e.image_id =
              obj + "_" + background_name(bg) + "_" + dev + "_" + orientation_name(pose);
          e.path = e.image_id + ".png";
          entries.push_back(std::move(e));
        }
  }
  return entries;
}

FeatureVector fv(std::vector<double> values) {
  FeatureVector v;
  v.method = FeatureMethod::Color;
  v.values = std::move(values);
  return v;
}

}  // namespace

TEST_CASE("full grid yields 25 background and 15 orientation groups") {
  const auto entries = full_grid(2);
  const auto bg_groups = build_background_groups(entries);
  CHECK(bg_groups.size() == 25);
  const auto or_groups = build_orientation_groups(entries);
  CHECK(or_groups.size() == 15);

  // background members: front + side views only
  for (const auto& g : bg_groups) CHECK(g.member_ids.size() == 2 * 3);
  // orientation classes: front(1), top(1), side(3) x 3 backdrops
  for (const auto& g : or_groups) {
    if (g.bucket == "side")
      CHECK(g.member_ids.size() == 2 * 3 * 3);
    else
      CHECK(g.member_ids.size() == 2 * 3);
  }
}

TEST_CASE("groups partition the eligible entries") {
  const auto entries = full_grid(3);
  for (const auto experiment : {Experiment::Background, Experiment::Orientation}) {
    const auto groups = build_groups(experiment, entries);
    std::set<std::string> seen;
    size_t total = 0;
    for (const auto& g : groups) {
      total += g.member_ids.size();
      for (const auto& id : g.member_ids) CHECK(seen.insert(id).second);  // disjoint
    }
    // eligibility recomputed independently
    size_t eligible = 0;
    for (const auto& e : entries) {
      if (experiment == Experiment::Background)
        eligible += (e.orientation == Orientation::Front || e.orientation == Orientation::Left ||
                     e.orientation == Orientation::Right);
      else
        eligible += (e.background == Background::White ||
                     e.background == Background::Kitchen2D ||
                     e.background == Background::LivingRoom2D);
    }
    CHECK(total == eligible);
  }
}

TEST_CASE("toy manifests produce the cartesian product of present cells") {
  auto entries = full_grid(1);
  // keep 2 devices x 2 backgrounds, front view only
  std::erase_if(entries, [](const ManifestEntry& e) {
    return !(e.device == "nikon_d80" || e.device == "lg_leon") ||
           !(e.background == Background::White || e.background == Background::Office3D) ||
           e.orientation != Orientation::Front;
  });
  CHECK(build_background_groups(entries).size() == 4);

  auto one_device = full_grid(1);
  std::erase_if(one_device, [](const ManifestEntry& e) { return e.device != "nikon_d80"; });
  CHECK(build_orientation_groups(one_device).size() == 3);
}

TEST_CASE("view filters drop ineligible rows and can empty the experiment") {
  auto entries = full_grid(1);
  std::erase_if(entries, [](const ManifestEntry& e) { return e.orientation != Orientation::Top; });
  // overhead views only: nothing passes the background-experiment filter...
  CHECK_THROWS_CODE(build_background_groups(entries), Errc::empty_manifest);
  CHECK_THROWS_CODE(build_background_groups({}), Errc::empty_manifest);
  // ...but the orientation experiment still groups them, minus the reference
  // which only exists in a front/white manifest; so that errors differently
  CHECK_THROWS_CODE(build_orientation_groups(entries), Errc::missing_reference);
}

TEST_CASE("challenged entries are excluded from groups") {
  auto entries = full_grid(1);
  const size_t clean_groups = build_background_groups(entries).size();
  ManifestEntry challenged = entries.front();
  challenged.image_id += "__gaussian_blur_3";
  challenged.challenge = ChallengeSpec{ChallengeKind::GaussianBlur, 3, 1};
  entries.push_back(challenged);
  const auto groups = build_background_groups(entries);
  CHECK(groups.size() == clean_groups);
  for (const auto& g : groups)
    for (const auto& id : g.member_ids) CHECK(id.find("__") == std::string::npos);
}

TEST_CASE("orientation groups contain only their class") {
  const auto groups = build_orientation_groups(full_grid(1));
  for (const auto& g : groups) {
    if (g.bucket != "top") continue;
    for (const auto& id : g.member_ids) CHECK(id.find("_top") != std::string::npos);
  }
}

TEST_CASE("reference image selection and tie-breaking") {
  auto entries = full_grid(1);
  CHECK(reference_image(entries, "obj0", "nikon_d80") ==
        "obj0_white_nikon_d80_front");

  // duplicate candidate with a lexicographically smaller id wins
  ManifestEntry extra = entries.front();
  extra.image_id = "aaa_duplicate_reference";
  extra.object_id = "obj0";
  extra.background = Background::White;
  extra.device = "nikon_d80";
  extra.orientation = Orientation::Front;
  entries.push_back(extra);
  CHECK(reference_image(entries, "obj0", "nikon_d80") == "aaa_duplicate_reference");

  CHECK_THROWS_CODE(reference_image(entries, "obj0", "polaroid"), Errc::missing_reference);
  CHECK_THROWS_CODE(reference_image(entries, "ghost", "nikon_d80"), Errc::missing_reference);
}

TEST_CASE("group mean distance averages member-to-reference distances") {
  const auto entries = full_grid(1);
  const auto groups = build_background_groups(entries);
  const auto img_to_obj = image_to_object(entries);

  // reference gets a distinct vector; members get vectors at known distances
  std::map<std::string, FeatureVector> features;
  for (const auto& e : entries) features.emplace(e.image_id, fv({0.0, 0.0}));
  DistanceSpec sad;
  sad.kind = DistanceKind::SAD;

  // group white/nikon_d80 contains the reference itself
  const auto white_nikon =
      std::find_if(groups.begin(), groups.end(), [](const ExperimentGroup& g) {
        return g.device == "nikon_d80" && g.bucket == "white";
      });
  REQUIRE(white_nikon != groups.end());
  CHECK(group_mean_distance(*white_nikon, features, img_to_obj, sad) == doctest::Approx(0.0));

  // make the three members of another group sit at distances 1, 2, 3
  const auto cell = std::find_if(groups.begin(), groups.end(), [](const ExperimentGroup& g) {
    return g.device == "lg_leon" && g.bucket == "office_3d";
  });
  REQUIRE(cell != groups.end());
  REQUIRE(cell->member_ids.size() == 3);
  double v = 1.0;
  for (const auto& id : cell->member_ids) features.at(id).values = {v++, 0.0};
  CHECK(group_mean_distance(*cell, features, img_to_obj, sad) == doctest::Approx(2.0));

  features.erase(cell->member_ids.front());
  CHECK_THROWS_CODE(group_mean_distance(*cell, features, img_to_obj, sad),
                    Errc::missing_feature);
}

TEST_CASE("group accuracy scores members only") {
  const auto entries = full_grid(1);
  const auto groups = build_background_groups(entries);
  const auto truths = truths_from_manifest(entries);
  const auto img_to_obj = image_to_object(entries);
  const auto& g = groups.front();
  REQUIRE(g.member_ids.size() == 3);

  std::map<std::string, PredictionRecord> preds;
  int rank = 0;
  for (const auto& id : g.member_ids) {
    PredictionRecord rec;
    rec.image_id = id;
    rec.platform = "mock";
    // first two hit (truth at rank 1), third misses
    rec.labels.push_back({rank < 2 ? "obj0" : "nothing", 0.9});
    preds.emplace(id, rec);
    ++rank;
  }
  CHECK(group_accuracy(g, preds, truths, img_to_obj) == doctest::Approx(2.0 / 3.0));

  preds.erase(g.member_ids.back());
  CHECK_THROWS_CODE(group_accuracy(g, preds, truths, img_to_obj), Errc::missing_prediction);
}

TEST_CASE("mean distance is permutation invariant via pairwise summation") {
  Rng rng(17);
  std::vector<double> values(1000);
  for (auto& v : values) v = rng.uniform(0.0, 1.0);
  const double a = pairwise_sum(values);
  std::reverse(values.begin(), values.end());
  // pairwise over the same multiset in a different order stays within 1e-12
  CHECK(pairwise_sum(values) == doctest::Approx(a).epsilon(1e-12));
  CHECK(pairwise_sum({}) == 0.0);
  CHECK(pairwise_sum({2.5}) == 2.5);
}
