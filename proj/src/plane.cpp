#include "gaboredge/plane.hpp"

namespace gaboredge {

void RgbImage::validate() const {
  if (width < 0 || height < 0 ||
      data.size() != static_cast<std::size_t>(width) * height * 3) {
    throw ParameterError("RGB buffer size does not match width*height*3");
  }
}

RealPlane mirror_pad(const RealPlane& src, int pad) {
  RealPlane out(src.width() + 2 * pad, src.height() + 2 * pad);
  for (int y = 0; y < out.height(); ++y) {
    const auto in_row = src.row(mirror_index(y - pad, src.height()));
    auto out_row = out.row(y);
    for (int x = 0; x < out.width(); ++x) {
      out_row[x] = in_row[mirror_index(x - pad, src.width())];
    }
  }
  return out;
}

std::size_t count_edges(const EdgeMap& edges) {
  std::size_t n = 0;
  for (auto v : edges.data()) n += v != 0;
  return n;
}

}  // namespace gaboredge
