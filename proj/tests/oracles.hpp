#pragma once

// Slow reference implementations used to check the library. They share no
// code with it beyond the Plane container.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "gaboredge/gabor.hpp"
#include "gaboredge/plane.hpp"

namespace oracle {

using gaboredge::EdgeMap;
using gaboredge::Plane;
using gaboredge::RealPlane;

// Reflection by walking: bounce off each border until inside.
inline int reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

inline std::complex<double> gabor(double f, double theta, double gamma, double eta, double u,
                                  double v) {
  const double up = u * std::cos(theta) + v * std::sin(theta);
  const double vp = -u * std::sin(theta) + v * std::cos(theta);
  const double env = f * f / (std::numbers::pi * gamma * eta) *
                     std::exp(-(f * f / (gamma * gamma) * up * up + f * f / (eta * eta) * vp * vp));
  return env * std::polar(1.0, 2.0 * std::numbers::pi * f * up);
}

// Direct double sum over the kernel support.
inline Plane<std::complex<double>> convolve(const RealPlane& img, const gaboredge::GaborKernel& k) {
  Plane<std::complex<double>> out(img.width(), img.height());
  const int h = k.half_width;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      std::complex<double> acc = 0.0;
      for (int dv = -h; dv <= h; ++dv) {
        for (int du = -h; du <= h; ++du) {
          acc += img(reflect(x - du, img.width()), reflect(y - dv, img.height())) * k.tap(du, dv);
        }
      }
      out(x, y) = acc;
    }
  }
  return out;
}

inline RealPlane box_mean(const RealPlane& img, int window) {
  const int r = window / 2;
  RealPlane out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double s = 0.0;
      for (int j = -r; j <= r; ++j) {
        for (int i = -r; i <= r; ++i) s += img(reflect(x + i, img.width()), reflect(y + j, img.height()));
      }
      out(x, y) = s / (window * window);
    }
  }
  return out;
}

inline RealPlane nearest_sq_distance(const EdgeMap& features) {
  RealPlane out(features.width(), features.height(), std::numeric_limits<double>::infinity());
  for (int y = 0; y < features.height(); ++y) {
    for (int x = 0; x < features.width(); ++x) {
      for (int v = 0; v < features.height(); ++v) {
        for (int u = 0; u < features.width(); ++u) {
          if (features(u, v)) {
            out(x, y) = std::min(out(x, y), double((x - u) * (x - u) + (y - v) * (y - v)));
          }
        }
      }
    }
  }
  return out;
}

inline double fom(const EdgeMap& det, const EdgeMap& gt) {
  const auto d2 = nearest_sq_distance(gt);
  std::size_t nd = 0, ng = 0;
  double s = 0.0;
  for (int y = 0; y < det.height(); ++y) {
    for (int x = 0; x < det.width(); ++x) {
      ng += gt(x, y) != 0;
      if (det(x, y)) {
        ++nd;
        s += 1.0 / (1.0 + 0.25 * d2(x, y));
      }
    }
  }
  return nd == 0 ? 0.0 : s / double(std::max(nd, ng));
}

// Value at 1-indexed rank floor(beta * n) of the sorted samples.
inline double percentile(std::vector<double> v, double beta) {
  std::sort(v.begin(), v.end());
  const auto n = static_cast<long>(v.size());
  long rank = static_cast<long>(std::floor(beta * double(n) + 1e-7));
  rank = std::clamp(rank, 1L, n);
  return v[static_cast<std::size_t>(rank - 1)];
}

// Exhaustive maximum one-to-one matching within `tol` by augmenting paths.
// Only usable on small maps; gives an upper bound for any greedy matcher.
inline std::size_t max_matching(const EdgeMap& det, const EdgeMap& gt, double tol) {
  std::vector<std::pair<int, int>> d, g;
  for (int y = 0; y < det.height(); ++y) {
    for (int x = 0; x < det.width(); ++x) {
      if (det(x, y)) d.push_back({x, y});
      if (gt(x, y)) g.push_back({x, y});
    }
  }
  std::vector<int> owner(g.size(), -1);
  std::size_t matched = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::vector<char> seen(g.size(), 0);
    auto augment = [&](auto&& self, std::size_t di) -> bool {
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double dx = d[di].first - g[j].first, dy = d[di].second - g[j].second;
        if (seen[j] || dx * dx + dy * dy > tol * tol) continue;
        seen[j] = 1;
        if (owner[j] < 0 || self(self, static_cast<std::size_t>(owner[j]))) {
          owner[j] = static_cast<int>(di);
          return true;
        }
      }
      return false;
    };
    matched += augment(augment, i);
  }
  return matched;
}

}  // namespace oracle
