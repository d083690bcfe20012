#include <doctest.h>

#include "gaboredge/synthetic.hpp"

using namespace gaboredge;
using namespace gaboredge::synthetic;

TEST_SUITE("synthetic") {

TEST_CASE("vertical step layout") {
  const auto s = vertical_step(10, 4, 6, {1, 2, 3}, {4, 5, 6});
  CHECK(s.image.pixel(5, 2)[0] == 1);
  CHECK(s.image.pixel(6, 2)[0] == 4);
  CHECK(count_edges(s.gt) == 4);
  CHECK(s.gt(6, 0) == 1);
}

TEST_CASE("four rotations return the original") {
  const auto s = random_scene(20, 12, 4);
  auto img = s.image;
  auto gt = s.gt;
  img = rotate90(img);
  gt = rotate90(gt);
  CHECK(img.width == 12);
  CHECK(img.height == 20);
  CHECK(std::equal(s.image.pixel(3, 5), s.image.pixel(3, 5) + 3, img.pixel(5, 20 - 1 - 3)));
  for (int i = 0; i < 3; ++i) {
    img = rotate90(img);
    gt = rotate90(gt);
  }
  CHECK(img == s.image);
  CHECK(gt == s.gt);
}

TEST_CASE("shape scenes") {
  for (auto shape : {Shape::step, Shape::corner, Shape::y_junction, Shape::x_junction}) {
    const auto s = shape_scene(shape, 32);
    CHECK(s.name == shape_name(shape));
    CHECK(s.image.width == 32);
    CHECK(count_edges(s.gt) >= 16);
  }
  const auto step = shape_scene(Shape::step, 32);
  CHECK(count_edges(step.gt) == 32);
  CHECK(step.gt(16, 7) == 1);
}

TEST_CASE("random scenes are seeded") {
  const auto a = random_scene(30, 30, 11);
  CHECK(a.image == random_scene(30, 30, 11).image);
  CHECK(a.gt == random_scene(30, 30, 11).gt);
  CHECK_FALSE(a.image == random_scene(30, 30, 12).image);
  CHECK(count_edges(a.gt) > 0);
}

}
