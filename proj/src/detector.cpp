#include "gaboredge/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace gaboredge {

namespace {

// Neighbor comparisons treat values within this relative distance as equal,
// so plateaus obey the tie rule regardless of summation-order noise.
constexpr double kTieTolerance = 1e-10;

bool definitely_greater(double a, double b) {
  return a > b + kTieTolerance * std::max(std::abs(a), std::abs(b));
}

bool not_less(double a, double b) { return !definitely_greater(b, a); }

double sample_bilinear(const RealPlane& p, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  auto at = [&](int xi, int yi) {
    return p(mirror_index(xi, p.width()), mirror_index(yi, p.height()));
  };
  return (1 - fy) * ((1 - fx) * at(x0, y0) + fx * at(x0 + 1, y0)) +
         fy * ((1 - fx) * at(x0, y0 + 1) + fx * at(x0 + 1, y0 + 1));
}

void check_betas(double beta_low, double beta_up, const std::string& prefix) {
  if (!(beta_low > 0.0 && beta_low < beta_up && beta_up < 1.0)) {
    std::ostringstream msg;
    msg << prefix << "beta_low (" << beta_low << ") and " << prefix << "beta_up (" << beta_up
        << ") must satisfy 0 < beta_low < beta_up < 1";
    throw ParameterError(msg.str());
  }
}

}  // namespace

std::vector<int> ChannelSet::indices() const {
  std::vector<int> out;
  if (l) out.push_back(0);
  if (a) out.push_back(1);
  if (b) out.push_back(2);
  return out;
}

void DetectorConfig::validate() const {
  try {
    gabor.validate();
  } catch (const ParameterError& e) {
    throw ParameterError(std::string("detector.") + e.what());
  }
  if (window < 3 || window % 2 == 0) {
    throw ParameterError("detector.window must be odd and >= 3, got " + std::to_string(window));
  }
  check_betas(beta_low, beta_up, "detector.");
  if (connectivity != 4 && connectivity != 8) {
    throw ParameterError("detector.connectivity must be 4 or 8");
  }
  if (channels.indices().empty()) {
    throw ParameterError("detector.channels must select at least one channel");
  }
}

RealPlane nms(const EqualizedEsm& xi, const OrientationMap& orient, NmsInterpolation interp,
              NmsDirection direction) {
  const RealPlane& v = xi.strength;
  if (!orient.k_star.same_shape(v)) throw ParameterError("nms: orientation map size mismatch");
  const int w = v.width();
  const int h = v.height();
  const int kcount = orient.orientations;

  std::vector<double> cx(kcount), cy(kcount);
  std::vector<int> dx(kcount), dy(kcount);
  for (int k = 0; k < kcount; ++k) {
    double phi = orientation_angle(k, kcount);
    if (direction == NmsDirection::carrier_plus_90) phi += std::numbers::pi / 2;
    cx[k] = std::cos(phi);
    cy[k] = std::sin(phi);
    dx[k] = static_cast<int>(std::lround(cx[k]));
    dy[k] = static_cast<int>(std::lround(cy[k]));
  }

  RealPlane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double c = v(x, y);
      if (!(c > 0.0)) continue;
      const int k = orient.k_star(x, y);
      double fwd, bwd;
      if (interp == NmsInterpolation::nearest) {
        fwd = v(mirror_index(x + dx[k], w), mirror_index(y + dy[k], h));
        bwd = v(mirror_index(x - dx[k], w), mirror_index(y - dy[k], h));
      } else {
        fwd = sample_bilinear(v, x + cx[k], y + cy[k]);
        bwd = sample_bilinear(v, x - cx[k], y - cy[k]);
      }
      if (definitely_greater(c, fwd) && not_less(c, bwd)) out(x, y) = c;
    }
  }
  return out;
}

Thresholds percentile_thresholds(const RealPlane& values, double beta_low, double beta_up) {
  check_betas(beta_low, beta_up, "");
  if (values.empty()) throw ParameterError("percentile_thresholds: empty map");
  std::vector<double> sorted = values.data();
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<long long>(sorted.size());
  auto at_rank = [&](double beta) {
    // Truncation toward zero; the small bias absorbs products such as
    // 0.29 * 100 = 28.999999999999996.
    auto rank = static_cast<long long>(std::floor(beta * static_cast<double>(n) + 1e-7));
    rank = std::clamp(rank, 1LL, n);
    return sorted[static_cast<std::size_t>(rank - 1)];
  };
  return {at_rank(beta_low), at_rank(beta_up)};
}

EdgeMap hysteresis(const RealPlane& thinned, double t_low, double t_up, int connectivity) {
  if (connectivity != 4 && connectivity != 8) {
    throw ParameterError("connectivity must be 4 or 8");
  }
  if (t_low > t_up) throw ParameterError("hysteresis: t_low > t_up");
  const int w = thinned.width();
  const int h = thinned.height();
  EdgeMap edges(w, h, 0);
  std::vector<std::pair<int, int>> stack;

  static constexpr int kNx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kNy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (edges(x, y) || !(thinned(x, y) > t_up)) continue;
      edges(x, y) = 1;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [px, py] = stack.back();
        stack.pop_back();
        for (int n = 0; n < connectivity; ++n) {
          const int qx = px + kNx[n];
          const int qy = py + kNy[n];
          if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
          if (edges(qx, qy) || !(thinned(qx, qy) > t_low)) continue;
          edges(qx, qy) = 1;
          stack.emplace_back(qx, qy);
        }
      }
    }
  }
  return edges;
}

DetectionStages compute_stages(const RgbImage& img, const DetectorConfig& cfg) {
  cfg.validate();
  img.validate();
  if (img.width == 0 || img.height == 0) throw ParameterError("image is empty");

  DetectionStages st;
  st.lab = rgb_to_lab(img, ColorOptions{cfg.srgb_gamma});
  const GaborBank bank = build_bank(cfg.gabor);
  st.channel_ids = cfg.channels.indices();
  st.scales = bank.scales();

  OrientationEnergy energy(img.width, img.height, bank.orientations());
  std::vector<RealPlane> mags(bank.orientations());
  for (int c : st.channel_ids) {
    const RealPlane& channel = st.lab.channel(c);
    for (int s = 0; s < bank.scales(); ++s) {
      for (int k = 0; k < bank.orientations(); ++k) {
        mags[k] = convolve_magnitude(channel, bank.at(s, k));
      }
      st.channel_esms.push_back(channel_esm_from_magnitudes(mags).esm);
      energy.add(mags);
    }
  }

  st.fused = fuse(st.channel_esms);
  st.orientation = energy.argmax();
  st.equalized = contrast_equalize(st.fused, cfg.window);
  st.thinned = nms(st.equalized, st.orientation, cfg.nms_interpolation, cfg.nms_direction);
  return st;
}

EdgeMap finish_detection(const DetectionStages& stages, double beta_low, double beta_up,
                         int connectivity) {
  const Thresholds t = percentile_thresholds(stages.equalized, beta_low, beta_up);
  return hysteresis(stages.thinned, t.low, t.up, connectivity);
}

EdgeMap detect_edges(const RgbImage& img, const DetectorConfig& cfg) {
  const DetectionStages st = compute_stages(img, cfg);
  return finish_detection(st, cfg.beta_low, cfg.beta_up, cfg.connectivity);
}

}  // namespace gaboredge
