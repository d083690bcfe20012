#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "gaboredge/plane.hpp"

namespace gaboredge::synthetic {

using Rgb = std::array<std::uint8_t, 3>;

struct Scene {
  std::string name;
  RgbImage image;
  EdgeMap gt;
};

/// Columns [0, boundary) take `left`, the rest `right`. GT marks column
/// `boundary`.
Scene vertical_step(int width, int height, int boundary, Rgb left, Rgb right);

enum class Shape { step, corner, y_junction, x_junction };

std::string shape_name(Shape s);

/// Square scene with region boundaries through pixel centers, rendered with
/// 8x8 supersampling so boundary pixels carry the mixed color. GT is the
/// digital (8-connected, one pixel wide) rasterization of the boundaries.
Scene shape_scene(Shape s, int size);

/// Overlapping discs, rectangles and triangles on a shaded background, hard
/// edged. Some region pairs share luminance and differ only in chroma. GT
/// marks each pixel whose label differs from its right or lower neighbor.
Scene random_scene(int width, int height, std::uint64_t seed);

/// Counterclockwise-on-screen 90 degree rotation: (x, y) -> (y, W - 1 - x).
RgbImage rotate90(const RgbImage& img);
EdgeMap rotate90(const EdgeMap& edges);

}  // namespace gaboredge::synthetic
