#include "gaboredge/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "gaboredge/colorspace.hpp"

namespace gaboredge::synthetic {

namespace {

constexpr std::array<Rgb, 4> kShapePalette = {{
    {190, 70, 60},
    {50, 110, 190},
    {220, 200, 70},
    {70, 160, 90},
}};

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

void set_pixel(RgbImage& img, int x, int y, Rgb c) {
  auto* p = img.pixel(x, y);
  p[0] = c[0];
  p[1] = c[1];
  p[2] = c[2];
}

void mark(EdgeMap& gt, int x, int y) {
  if (x >= 0 && y >= 0 && x < gt.width() && y < gt.height()) gt(x, y) = 1;
}

// One-pixel-wide digital ray from (cx, cy) along angle `phi` to the border.
void rasterize_ray(EdgeMap& gt, int cx, int cy, double phi) {
  const double dx = std::cos(phi);
  const double dy = std::sin(phi);
  const int n = std::max(gt.width(), gt.height());
  if (std::abs(dx) >= std::abs(dy)) {
    const int step = dx > 0 ? 1 : -1;
    for (int i = 0; i <= n; ++i) {
      const int x = cx + step * i;
      mark(gt, x, cy + static_cast<int>(std::lround(dy / std::abs(dx) * i)));
    }
  } else {
    const int step = dy > 0 ? 1 : -1;
    for (int i = 0; i <= n; ++i) {
      const int y = cy + step * i;
      mark(gt, cx + static_cast<int>(std::lround(dx / std::abs(dy) * i)), y);
    }
  }
}

Scene render_supersampled(const std::string& name, int size,
                          const std::function<int(double, double)>& label) {
  constexpr int kSub = 8;
  Scene s{name, RgbImage(size, size), EdgeMap(size, size, 0)};
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      std::array<double, 3> acc{};
      for (int j = 0; j < kSub; ++j) {
        for (int i = 0; i < kSub; ++i) {
          const double px = x + (i + 0.5) / kSub - 0.5;
          const double py = y + (j + 0.5) / kSub - 0.5;
          const Rgb& c = kShapePalette[label(px, py)];
          for (int k = 0; k < 3; ++k) acc[k] += c[k];
        }
      }
      auto* p = s.image.pixel(x, y);
      for (int k = 0; k < 3; ++k) {
        p[k] = static_cast<std::uint8_t>(std::lround(acc[k] / (kSub * kSub)));
      }
    }
  }
  return s;
}

double luminance(const std::array<double, 3>& c) {
  const auto& m = kRgbToXyz[1];
  return m[0] * c[0] + m[1] * c[1] + m[2] * c[2];
}

std::array<double, 3> lab_of(const std::array<double, 3>& c) {
  const auto xyz = rgb_to_xyz_pixel(c[0] / 255.0, c[1] / 255.0, c[2] / 255.0);
  return xyz_to_lab_pixel(xyz[0], xyz[1], xyz[2]);
}

double distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                   (a[2] - b[2]) * (a[2] - b[2]));
}

// Random color with the same luminance as `ref` but a clearly different
// chromaticity. Falls back to an ordinary random color if none is found.
std::array<double, 3> isoluminant_partner(const std::array<double, 3>& ref, Uniform& rnd) {
  const double y_ref = luminance(ref);
  const auto lab_ref = lab_of(ref);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::array<double, 3> v{rnd(10, 255), rnd(10, 255), rnd(10, 255)};
    const double scale = y_ref / luminance(v);
    for (auto& c : v) c = std::round(c * scale);
    if (*std::max_element(v.begin(), v.end()) > 255.0) continue;
    const auto lab = lab_of(v);
    const double chroma_gap = std::hypot(lab[1] - lab_ref[1], lab[2] - lab_ref[2]);
    if (chroma_gap >= 25.0 && std::abs(lab[0] - lab_ref[0]) < 2.0) return v;
  }
  return {rnd(0, 255), rnd(0, 255), rnd(0, 255)};
}

std::array<double, 3> contrasting_color(const std::array<double, 3>& ref, Uniform& rnd) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::array<double, 3> v{std::round(rnd(0, 255)), std::round(rnd(0, 255)),
                            std::round(rnd(0, 255))};
    if (distance(lab_of(v), lab_of(ref)) >= 25.0) return v;
  }
  return {255.0 - ref[0], 255.0 - ref[1], 255.0 - ref[2]};
}

}  // namespace

Scene vertical_step(int width, int height, int boundary, Rgb left, Rgb right) {
  Scene s{"step", RgbImage(width, height), EdgeMap(width, height, 0)};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) set_pixel(s.image, x, y, x < boundary ? left : right);
    mark(s.gt, boundary, y);
  }
  return s;
}

std::string shape_name(Shape s) {
  switch (s) {
    case Shape::step: return "step";
    case Shape::corner: return "corner";
    case Shape::y_junction: return "y_junction";
    case Shape::x_junction: return "x_junction";
  }
  return "unknown";
}

Scene shape_scene(Shape shape, int size) {
  const int c = size / 2;
  const double cd = c;
  const double deg = std::numbers::pi / 180.0;
  Scene s;
  switch (shape) {
    case Shape::step:
      s = render_supersampled("step", size, [=](double x, double) { return x >= cd ? 1 : 0; });
      for (int y = 0; y < size; ++y) mark(s.gt, c, y);
      break;
    case Shape::corner:
      s = render_supersampled("corner", size, [=](double x, double y) {
        return (x >= cd && y >= cd) ? 1 : 0;
      });
      for (int i = c; i < size; ++i) {
        mark(s.gt, c, i);
        mark(s.gt, i, c);
      }
      break;
    case Shape::y_junction:
      // Rays at -90, 30 and 150 degrees (y axis pointing down).
      s = render_supersampled("y_junction", size, [=](double x, double y) {
        const double phi = std::atan2(y - cd, x - cd) / deg;
        if (phi >= -90.0 && phi < 30.0) return 0;
        if (phi >= 30.0 && phi < 150.0) return 1;
        return 2;
      });
      rasterize_ray(s.gt, c, c, -90.0 * deg);
      rasterize_ray(s.gt, c, c, 30.0 * deg);
      rasterize_ray(s.gt, c, c, 150.0 * deg);
      break;
    case Shape::x_junction:
      s = render_supersampled("x_junction", size, [=](double x, double y) {
        const double dx = x - cd;
        const double dy = y - cd;
        return (dx - dy > 0 ? 2 : 0) + (dx + dy > 0 ? 1 : 0);
      });
      for (int i = 0; i < size; ++i) {
        mark(s.gt, i, i);
        mark(s.gt, i, 2 * c - i);
      }
      break;
  }
  return s;
}

Scene random_scene(int width, int height, std::uint64_t seed) {
  Uniform rnd(seed);
  std::vector<std::array<double, 3>> colors;
  colors.push_back({std::round(rnd(40, 215)), std::round(rnd(40, 215)), std::round(rnd(40, 215))});

  // Shapes as inclusion tests on pixel centers, painted in order.
  std::vector<std::function<bool(double, double)>> shapes;
  const int n_shapes = rnd.integer(4, 6);
  const double dim = std::min(width, height);
  for (int i = 0; i < n_shapes; ++i) {
    const int kind = rnd.integer(0, 2);
    if (kind == 0) {
      const double cx = rnd(0.15, 0.85) * width;
      const double cy = rnd(0.15, 0.85) * height;
      const double r = rnd(0.10, 0.28) * dim;
      shapes.emplace_back([=](double x, double y) {
        return (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
      });
    } else if (kind == 1) {
      const double x0 = rnd(0.05, 0.6) * width;
      const double y0 = rnd(0.05, 0.6) * height;
      const double x1 = x0 + rnd(0.2, 0.45) * width;
      const double y1 = y0 + rnd(0.2, 0.45) * height;
      shapes.emplace_back([=](double x, double y) { return x >= x0 && x < x1 && y >= y0 && y < y1; });
    } else {
      std::array<double, 6> v{};
      for (int k = 0; k < 3; ++k) {
        v[2 * k] = rnd(0.0, 1.0) * width;
        v[2 * k + 1] = rnd(0.0, 1.0) * height;
      }
      shapes.emplace_back([=](double x, double y) {
        auto side = [&](int a, int b) {
          return (v[2 * b] - v[2 * a]) * (y - v[2 * a + 1]) -
                 (v[2 * b + 1] - v[2 * a + 1]) * (x - v[2 * a]);
        };
        const double s0 = side(0, 1), s1 = side(1, 2), s2 = side(2, 0);
        return (s0 >= 0 && s1 >= 0 && s2 >= 0) || (s0 <= 0 && s1 <= 0 && s2 <= 0);
      });
    }
    // Pick a color relative to a random earlier region so that some
    // boundaries are chroma-only.
    const auto& ref = colors[rnd.integer(0, static_cast<int>(colors.size()) - 1)];
    colors.push_back(rnd() < 0.45 ? isoluminant_partner(ref, rnd) : contrasting_color(ref, rnd));
  }

  Plane<int> labels(width, height, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (std::size_t k = 0; k < shapes.size(); ++k) {
        if (shapes[k](x, y)) labels(x, y) = static_cast<int>(k) + 1;
      }
    }
  }

  const double shade = rnd(-12.0, 12.0);
  Scene s{"scene_" + std::to_string(seed), RgbImage(width, height), EdgeMap(width, height, 0)};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const auto& c = colors[labels(x, y)];
      const double offset = shade * ((x + y) / double(width + height) - 0.5);
      auto* p = s.image.pixel(x, y);
      for (int k = 0; k < 3; ++k) {
        p[k] = static_cast<std::uint8_t>(std::clamp(std::round(c[k] + offset), 0.0, 255.0));
      }
      const bool right = x + 1 < width && labels(x + 1, y) != labels(x, y);
      const bool down = y + 1 < height && labels(x, y + 1) != labels(x, y);
      if (right || down) s.gt(x, y) = 1;
    }
  }
  return s;
}

RgbImage rotate90(const RgbImage& img) {
  RgbImage out(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const auto* src = img.pixel(x, y);
      std::copy(src, src + 3, out.pixel(y, img.width - 1 - x));
    }
  }
  return out;
}

EdgeMap rotate90(const EdgeMap& edges) {
  EdgeMap out(edges.height(), edges.width(), 0);
  for (int y = 0; y < edges.height(); ++y) {
    for (int x = 0; x < edges.width(); ++x) out(y, edges.width() - 1 - x) = edges(x, y);
  }
  return out;
}

}  // namespace gaboredge::synthetic
