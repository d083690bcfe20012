#pragma once

#include <array>

#include "gaboredge/plane.hpp"

namespace gaboredge {

/// Three real planes on the 0-100 tristimulus scale.
struct XyzImage {
  RealPlane x, y, z;
  int width() const { return x.width(); }
  int height() const { return x.height(); }
};

/// L* in [0, 100]; a*, b* roughly in [-128, 127].
struct LabImage {
  RealPlane l, a, b;
  int width() const { return l.width(); }
  int height() const { return l.height(); }
  const RealPlane& channel(int i) const { return i == 0 ? l : (i == 1 ? a : b); }
};

struct ColorOptions {
  /// Apply the IEC 61966-2-1 transfer curve before the matrix. Off by
  /// default: the matrix is applied to the normalized 8-bit values directly.
  bool srgb_gamma = false;
};

namespace white_point {
inline constexpr double kX = 95.047;
inline constexpr double kY = 100.0;
inline constexpr double kZ = 108.883;
}  // namespace white_point

/// RGB -> XYZ rows. These are the published coefficients, whose row sums are
/// 0.9503 / 1.0002 / 1.0887 rather than the exact D65 white.
inline constexpr std::array<std::array<double, 3>, 3> kRgbToXyz = {{
    {0.4124, 0.3575, 0.1804},
    {0.2128, 0.7152, 0.0722},
    {0.0193, 0.1192, 0.9502},
}};

/// Cube root above the knee t = 0.008856, linear segment 7.787 t + 4/29 below.
/// Throws std::domain_error for negative t.
double lab_nonlinearity(double t);

/// Per-pixel XYZ (0-100 scale) of one normalized RGB triple in [0,1].
std::array<double, 3> rgb_to_xyz_pixel(double r, double g, double b);
std::array<double, 3> xyz_to_lab_pixel(double x, double y, double z);

XyzImage srgb_to_xyz(const RgbImage& img, ColorOptions opts = {});
LabImage xyz_to_lab(const XyzImage& img);
LabImage rgb_to_lab(const RgbImage& img, ColorOptions opts = {});

}  // namespace gaboredge
