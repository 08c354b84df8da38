#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "percept/image.hpp"
#include "percept/rng.hpp"
#include "test_support.hpp"

using namespace percept;

namespace {

Image random_image(uint64_t seed, int w, int h, int channels) {
  Rng rng(seed);
  Image img(w, h, channels);
  for (auto& s : img.samples) s = static_cast<uint8_t>(rng.next_below(256));
  return img;
}

FloatPlane random_plane(uint64_t seed, int w, int h) {
  Rng rng(seed);
  FloatPlane p(w, h);
  for (auto& v : p.values) v = rng.uniform(-10.0, 10.0);
  return p;
}

}  // namespace

TEST_CASE("grayscale weights match BT.601") {
  Image px(1, 1, 3);
  px.samples = {255, 255, 255};
  CHECK(to_grayscale(px).samples[0] == 255);
  px.samples = {255, 0, 0};
  CHECK(to_grayscale(px).samples[0] == 76);  // round(0.299*255)
  px.samples = {0, 255, 0};
  CHECK(to_grayscale(px).samples[0] == 150);  // 149.685 rounds up
  px.samples = {0, 0, 255};
  CHECK(to_grayscale(px).samples[0] == 29);
}

TEST_CASE("grayscale is idempotent") {
  const Image img = random_image(11, 17, 9, 3);
  const Image once = to_grayscale(img);
  const Image twice = to_grayscale(once);
  CHECK(once == twice);
}

TEST_CASE("resize to identical dimensions is bitwise identity") {
  const Image img = random_image(5, 13, 7, 3);
  CHECK(resize_bilinear(img, 13, 7) == img);
}

TEST_CASE("resize of a constant image stays constant") {
  Image img(9, 6, 1, 173);
  for (auto [w, h] : {std::pair{4, 4}, {17, 3}, {30, 30}}) {
    const Image out = resize_bilinear(img, w, h);
    CHECK(std::all_of(out.samples.begin(), out.samples.end(),
                      [](uint8_t v) { return v == 173; }));
  }
}

TEST_CASE("2x1 ramp upsamples to a monotone row") {
  Image img(2, 1, 1);
  img.samples = {0, 255};
  const Image out = resize_bilinear(img, 4, 1);
  REQUIRE(out.width == 4);
  for (int x = 0; x + 1 < 4; ++x) CHECK(out.samples[x] <= out.samples[x + 1]);
  CHECK(out.samples[0] == 0);
  CHECK(out.samples[3] == 255);
}

TEST_CASE("resize stays inside the input min/max bounds") {
  const Image img = random_image(23, 19, 11, 3);
  const auto [lo, hi] = std::minmax_element(img.samples.begin(), img.samples.end());
  for (auto [w, h] : {std::pair{7, 5}, {40, 23}, {19, 11}}) {
    const Image out = resize_bilinear(img, w, h);
    for (uint8_t v : out.samples) {
      CHECK(v >= *lo);
      CHECK(v <= *hi);
    }
  }
}

TEST_CASE("identity kernel leaves the plane unchanged") {
  const FloatPlane p = random_plane(3, 8, 6);
  const Kernel identity{1, 1, {1.0}};
  const FloatPlane out = convolve2d(p, identity);
  for (size_t i = 0; i < p.values.size(); ++i) CHECK(out.values[i] == doctest::Approx(p.values[i]));
}

TEST_CASE("box kernel on a constant plane is exact") {
  FloatPlane p(10, 10, 4.25);
  const Kernel box{3, 3, std::vector<double>(9, 1.0 / 9.0)};
  const FloatPlane out = convolve2d(p, box);
  for (double v : out.values) CHECK(v == doctest::Approx(4.25).epsilon(1e-12));
}

TEST_CASE("even kernels are rejected") {
  const FloatPlane p = random_plane(9, 6, 6);
  CHECK_THROWS_CODE(convolve2d(p, Kernel{2, 2, {1, 0, 0, 0}}), Errc::even_kernel);
  CHECK_THROWS_CODE(convolve2d(p, Kernel{3, 2, {1, 0, 0, 0, 0, 0}}), Errc::even_kernel);
}

TEST_CASE("sobel-x peaks at a vertical step and vanishes far away") {
  FloatPlane p(11, 5);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 11; ++x) p.at(x, y) = x < 5 ? 0.0 : 100.0;
  const Kernel sobel{3, 3, {-1, 0, 1, -2, 0, 2, -1, 0, 1}};
  const FloatPlane out = convolve2d(p, sobel);
  // hand-computed: window centered between the 0 and 100 columns sums to 400
  CHECK(out.at(4, 2) == doctest::Approx(400.0));
  CHECK(out.at(5, 2) == doctest::Approx(400.0));
  CHECK(out.at(1, 2) == doctest::Approx(0.0));
  CHECK(out.at(9, 2) == doctest::Approx(0.0));
}

TEST_CASE("convolution is linear") {
  const FloatPlane p = random_plane(31, 12, 9);
  const FloatPlane q = random_plane(32, 12, 9);
  Rng rng(33);
  Kernel k{5, 3, {}};
  k.values.resize(15);
  for (auto& v : k.values) v = rng.uniform(-1.0, 1.0);
  const double a = 2.5, b = -1.25;

  FloatPlane combo(12, 9);
  for (size_t i = 0; i < combo.values.size(); ++i)
    combo.values[i] = a * p.values[i] + b * q.values[i];
  const FloatPlane lhs = convolve2d(combo, k);
  const FloatPlane cp = convolve2d(p, k);
  const FloatPlane cq = convolve2d(q, k);
  for (size_t i = 0; i < lhs.values.size(); ++i)
    CHECK(lhs.values[i] == doctest::Approx(a * cp.values[i] + b * cq.values[i]).epsilon(1e-9));
}

TEST_CASE("reflect101 folds indices") {
  CHECK(reflect101(0, 5) == 0);
  CHECK(reflect101(-1, 5) == 1);
  CHECK(reflect101(-2, 5) == 2);
  CHECK(reflect101(5, 5) == 3);
  CHECK(reflect101(6, 5) == 2);
  CHECK(reflect101(3, 1) == 0);
}

TEST_CASE("gaussian blur preserves a constant plane exactly") {
  FloatPlane p(20, 14, 7.5);
  const FloatPlane out = gaussian_blur(p, 2.0);
  for (double v : out.values) CHECK(v == doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("standardize yields the crop geometry") {
  const Image img = random_image(40, 300, 200, 3);
  const Image out = standardize(img);
  CHECK(out.width == 224);
  CHECK(out.height == 224);
  CHECK(out.channels == 3);

  const Image small = standardize(random_image(41, 50, 80, 1));
  CHECK(small.width == 224);
  CHECK(small.height == 224);
}

TEST_CASE("quantize rounds half up and clamps") {
  CHECK(quantize_u8(-3.0) == 0);
  CHECK(quantize_u8(0.49) == 0);
  CHECK(quantize_u8(0.5) == 1);
  CHECK(quantize_u8(254.5) == 255);
  CHECK(quantize_u8(300.0) == 255);
}

TEST_CASE("non-positive resize targets are rejected") {
  const Image img = random_image(1, 4, 4, 1);
  CHECK_THROWS_CODE(resize_bilinear(img, 0, 4), Errc::bad_config);
  CHECK_THROWS_CODE(resize_bilinear(img, 4, -1), Errc::bad_config);
}
