#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gaboredge/colorspace.hpp"

using namespace gaboredge;

TEST_SUITE("colorspace") {

TEST_CASE("nonlinearity branches meet at the knee") {
  const double knee = 0.008856;
  CHECK(lab_nonlinearity(knee) == doctest::Approx(0.2068927065).epsilon(1e-9));
  CHECK(lab_nonlinearity(std::nextafter(knee, 1.0)) == doctest::Approx(0.2068930344).epsilon(1e-9));
  CHECK(std::abs(lab_nonlinearity(std::nextafter(knee, 1.0)) - lab_nonlinearity(knee)) < 2e-4);
  CHECK(lab_nonlinearity(1.0) == 1.0);
  CHECK(lab_nonlinearity(0.0) == doctest::Approx(4.0 / 29.0));
  CHECK_THROWS_AS(lab_nonlinearity(-1e-3), std::domain_error);
}

TEST_CASE("matrix anchors") {
  const auto white = rgb_to_xyz_pixel(1, 1, 1);
  CHECK(white[0] == doctest::Approx(95.03).epsilon(1e-9));
  CHECK(white[1] == doctest::Approx(100.02).epsilon(1e-9));
  CHECK(white[2] == doctest::Approx(108.87).epsilon(1e-9));
  const auto red = rgb_to_xyz_pixel(1, 0, 0);
  CHECK(red[0] == doctest::Approx(41.24));
  CHECK(red[1] == doctest::Approx(21.28));
  CHECK(red[2] == doctest::Approx(1.93));
}

TEST_CASE("lab anchors") {
  const auto black = xyz_to_lab_pixel(0, 0, 0);
  CHECK(std::abs(black[0]) <= 1e-6);
  CHECK(std::abs(black[1]) <= 1e-6);
  CHECK(std::abs(black[2]) <= 1e-6);
  const auto white = xyz_to_lab_pixel(white_point::kX, white_point::kY, white_point::kZ);
  CHECK(std::abs(white[0] - 100.0) <= 1e-6);
  CHECK(std::abs(white[1]) <= 1e-9);
  CHECK(std::abs(white[2]) <= 1e-9);
}

TEST_CASE("pure red and orange-red against frozen values") {
  RgbImage img(2, 1);
  img.data = {255, 0, 0, 200, 60, 50};
  const auto lab = rgb_to_lab(img);
  CHECK(lab.l(0, 0) == doctest::Approx(53.2545848850).epsilon(1e-10));
  CHECK(lab.a(0, 0) == doctest::Approx(80.0157616886).epsilon(1e-10));
  CHECK(lab.b(0, 0) == doctest::Approx(67.2574874467).epsilon(1e-10));
  CHECK(lab.l(1, 0) == doctest::Approx(65.6973397941).epsilon(1e-10));
  CHECK(lab.a(1, 0) == doctest::Approx(35.5057849960).epsilon(1e-10));
  CHECK(lab.b(1, 0) == doctest::Approx(21.8330015134).epsilon(1e-10));
}

TEST_CASE("white and mid gray") {
  RgbImage img(2, 1);
  img.data = {255, 255, 255, 128, 128, 128};
  for (bool gamma : {false, true}) {
    const auto lab = rgb_to_lab(img, {gamma});
    CHECK(lab.l(0, 0) == doctest::Approx(100.0).epsilon(0.001));
    CHECK(std::abs(lab.a(1, 0)) < 0.5);
    CHECK(std::abs(lab.b(1, 0)) < 0.5);
  }
}

TEST_CASE("gray ramp is strictly increasing in L*") {
  RgbImage ramp(256, 1);
  for (int v = 0; v < 256; ++v) {
    auto* p = ramp.pixel(v, 0);
    p[0] = p[1] = p[2] = static_cast<std::uint8_t>(v);
  }
  for (bool gamma : {false, true}) {
    const auto lab = rgb_to_lab(ramp, {gamma});
    for (int v = 1; v < 256; ++v) CHECK(lab.l(v, 0) > lab.l(v - 1, 0));
  }
}

TEST_CASE("image conversion agrees with the per-pixel path") {
  RgbImage img(7, 5);
  for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = static_cast<std::uint8_t>(i * 37 % 256);
  const auto lab = rgb_to_lab(img);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 7; ++x) {
      const auto* p = img.pixel(x, y);
      const auto xyz = rgb_to_xyz_pixel(p[0] / 255.0, p[1] / 255.0, p[2] / 255.0);
      const auto ref = xyz_to_lab_pixel(xyz[0], xyz[1], xyz[2]);
      CHECK(lab.l(x, y) == doctest::Approx(ref[0]).epsilon(1e-12));
      CHECK(lab.a(x, y) == doctest::Approx(ref[1]).epsilon(1e-12));
      CHECK(lab.b(x, y) == doctest::Approx(ref[2]).epsilon(1e-12));
    }
  }
}

TEST_CASE("gamma linearization darkens mid tones") {
  RgbImage img(1, 1, 128);
  CHECK(rgb_to_lab(img, {true}).l(0, 0) < rgb_to_lab(img, {false}).l(0, 0));
}

TEST_CASE("malformed image buffer is rejected") {
  RgbImage img(4, 4);
  img.data.pop_back();
  CHECK_THROWS_AS(rgb_to_lab(img), ParameterError);
}

}
