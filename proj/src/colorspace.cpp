#include "gaboredge/colorspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gaboredge {

namespace {

double srgb_decode(double v) {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

}  // namespace

double lab_nonlinearity(double t) {
  if (!(t >= 0.0)) throw std::domain_error("lab_nonlinearity: t must be >= 0");
  return t > 0.008856 ? std::cbrt(t) : 7.787 * t + 4.0 / 29.0;
}

std::array<double, 3> rgb_to_xyz_pixel(double r, double g, double b) {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    const auto& m = kRgbToXyz[i];
    out[i] = 100.0 * (m[0] * r + m[1] * g + m[2] * b);
  }
  return out;
}

std::array<double, 3> xyz_to_lab_pixel(double x, double y, double z) {
  // Clamp tiny negative values from rounding; the matrix has no negative
  // entries so real inputs never go below zero.
  const double fx = lab_nonlinearity(std::max(0.0, x / white_point::kX));
  const double fy = lab_nonlinearity(std::max(0.0, y / white_point::kY));
  const double fz = lab_nonlinearity(std::max(0.0, z / white_point::kZ));
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

XyzImage srgb_to_xyz(const RgbImage& img, ColorOptions opts) {
  img.validate();
  XyzImage out{RealPlane(img.width, img.height), RealPlane(img.width, img.height),
               RealPlane(img.width, img.height)};
  // 256-entry lookup so gamma decoding costs nothing per pixel.
  std::array<double, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    const double n = v / 255.0;
    lut[v] = opts.srgb_gamma ? srgb_decode(n) : n;
  }
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const auto* p = img.pixel(x, y);
      const auto xyz = rgb_to_xyz_pixel(lut[p[0]], lut[p[1]], lut[p[2]]);
      out.x(x, y) = xyz[0];
      out.y(x, y) = xyz[1];
      out.z(x, y) = xyz[2];
    }
  }
  return out;
}

LabImage xyz_to_lab(const XyzImage& img) {
  const int w = img.width();
  const int h = img.height();
  if (!img.y.same_shape(w, h) || !img.z.same_shape(w, h)) {
    throw ParameterError("XYZ planes differ in size");
  }
  LabImage out{RealPlane(w, h), RealPlane(w, h), RealPlane(w, h)};
  for (std::size_t i = 0; i < img.x.size(); ++i) {
    const auto lab = xyz_to_lab_pixel(img.x.data()[i], img.y.data()[i], img.z.data()[i]);
    out.l.data()[i] = lab[0];
    out.a.data()[i] = lab[1];
    out.b.data()[i] = lab[2];
  }
  return out;
}

LabImage rgb_to_lab(const RgbImage& img, ColorOptions opts) {
  return xyz_to_lab(srgb_to_xyz(img, opts));
}

}  // namespace gaboredge
