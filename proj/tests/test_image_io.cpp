#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "gaboredge/image_io.hpp"
#include "support.hpp"

using namespace gaboredge;
namespace fs = std::filesystem;

namespace {

RgbImage gradient(int w, int h) {
  RgbImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto* p = img.pixel(x, y);
      p[0] = static_cast<std::uint8_t>(x * 13);
      p[1] = static_cast<std::uint8_t>(y * 29);
      p[2] = static_cast<std::uint8_t>((x + y) * 7);
    }
  }
  return img;
}

void write_text(const fs::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

}  // namespace

TEST_SUITE("image_io") {

TEST_CASE("PNG and PPM round trips") {
  testing::TempDir dir("io_rt");
  const auto img = gradient(17, 9);
  write_rgb(dir / "a.png", img);
  write_rgb(dir / "a.ppm", img);
  CHECK(read_rgb(dir / "a.png") == img);
  CHECK(read_rgb(dir / "a.ppm") == img);
  const auto raster = read_raster(dir / "a.png");
  CHECK(raster.channels == 3);
  CHECK(raster.bit_depth == 8);
}

TEST_CASE("16-bit gray PNG keeps full precision") {
  testing::TempDir dir("io_16");
  Plane<std::uint16_t> g(5, 3);
  for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] = static_cast<std::uint16_t>(i * 4099);
  write_gray16_png(dir / "g.png", g);
  const auto r = read_raster(dir / "g.png");
  CHECK(r.bit_depth == 16);
  CHECK(r.channels == 1);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.samples[i] == g.data()[i]);
  const auto rgb = read_rgb(dir / "g.png");
  CHECK(rgb.pixel(1, 0)[0] == (4099 >> 8));
  CHECK(rgb.pixel(1, 0)[2] == (4099 >> 8));
}

TEST_CASE("PGM input and comments in headers") {
  testing::TempDir dir("io_pgm");
  write_text(dir / "g.pgm", std::string("P5\n# comment\n3 2\n255\n") + std::string("\x00\x10\x20\x30\x40\xff", 6));
  const auto img = read_rgb(dir / "g.pgm");
  CHECK(img.width == 3);
  CHECK(img.height == 2);
  CHECK(img.pixel(2, 1)[1] == 255);
  CHECK(img.pixel(1, 0)[0] == 0x10);
}

TEST_CASE("edge maps read any nonzero sample as an edge") {
  testing::TempDir dir("io_edge");
  EdgeMap e(6, 4, 0);
  e(1, 1) = 1;
  e(5, 3) = 1;
  write_edge_png(dir / "e.png", e);
  CHECK(read_raster(dir / "e.png").samples[6 + 1] == 255);
  CHECK(read_edge_map(dir / "e.png") == e);
  RgbImage color(2, 1, 0);
  color.pixel(1, 0)[2] = 3;
  write_rgb(dir / "c.png", color);
  const auto m = read_edge_map(dir / "c.png");
  CHECK(m(0, 0) == 0);
  CHECK(m(1, 0) == 1);
}

TEST_CASE("bad inputs raise I/O errors") {
  testing::TempDir dir("io_bad");
  CHECK_THROWS_AS(read_rgb(dir / "missing.png"), IoError);
  write_text(dir / "junk.png", "not an image at all");
  CHECK_THROWS_AS(read_rgb(dir / "junk.png"), IoError);
  write_text(dir / "trunc.ppm", "P6\n4 4\n255\nabc");
  CHECK_THROWS_AS(read_rgb(dir / "trunc.ppm"), IoError);
  auto png = encode_png({2, 2, 3, 8, std::vector<std::uint16_t>(12, 9)});
  png.resize(png.size() / 2);
  write_text(dir / "cut.png", std::string(png.begin(), png.end()));
  CHECK_THROWS_AS(read_rgb(dir / "cut.png"), IoError);
  CHECK_THROWS_AS(write_rgb(dir / "no" / "such" / "dir.png", RgbImage(2, 2)), IoError);
}

TEST_CASE("atomic writes leave only the target") {
  testing::TempDir dir("io_atomic");
  write_file_atomic(dir / "out.txt", std::string("first"));
  write_file_atomic(dir / "out.txt", std::string("second"));
  std::ifstream in(dir / "out.txt");
  std::string text;
  in >> text;
  CHECK(text == "second");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path())) ++entries;
  CHECK(entries == 1);
}

TEST_CASE("encoding is deterministic") {
  const auto img = gradient(8, 8);
  RasterImage r{8, 8, 3, 8, std::vector<std::uint16_t>(img.data.begin(), img.data.end())};
  CHECK(encode_png(r) == encode_png(r));
  const auto ppm = encode_ppm(img);
  CHECK(std::string(ppm.begin(), ppm.begin() + 2) == "P6");
  CHECK(ppm.size() == std::string("P6\n8 8\n255\n").size() + 192);
}

}
