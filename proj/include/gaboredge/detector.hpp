#pragma once

#include <vector>

#include "gaboredge/colorspace.hpp"
#include "gaboredge/esm.hpp"
#include "gaboredge/gabor.hpp"

namespace gaboredge {

enum class NmsInterpolation { nearest, linear };

/// Which way NMS steps relative to the winning carrier orientation.
enum class NmsDirection { carrier, carrier_plus_90 };

/// Subset of the L*, a*, b* channels fed to the bank.
struct ChannelSet {
  bool l = true;
  bool a = true;
  bool b = true;

  std::vector<int> indices() const;
  friend bool operator==(const ChannelSet&, const ChannelSet&) = default;
};

struct DetectorConfig {
  GaborParams gabor;
  int window = 7;
  double beta_low = 0.70;
  double beta_up = 0.90;
  int connectivity = 8;
  NmsInterpolation nms_interpolation = NmsInterpolation::nearest;
  NmsDirection nms_direction = NmsDirection::carrier;
  ChannelSet channels;
  bool srgb_gamma = false;

  /// Throws ParameterError with a dotted field path.
  void validate() const;

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

struct Thresholds {
  double low = 0.0;
  double up = 0.0;
};

/// Thinning along the direction implied by each pixel's orientation. A pixel
/// keeps its value when it is strictly above the forward neighbor and not
/// below the backward one; everything else becomes 0.
RealPlane nms(const EqualizedEsm& xi, const OrientationMap& orient,
              NmsInterpolation interp = NmsInterpolation::nearest,
              NmsDirection direction = NmsDirection::carrier);

/// Sorted-rank thresholds: T = value at 1-indexed rank floor(beta * M * N),
/// rank clamped to [1, M * N].
Thresholds percentile_thresholds(const RealPlane& values, double beta_low, double beta_up);
inline Thresholds percentile_thresholds(const EqualizedEsm& xi, double beta_low, double beta_up) {
  return percentile_thresholds(xi.strength, beta_low, beta_up);
}

/// Pixels > t_up are edges; pixels in (t_low, t_up] are edges when connected
/// to one of those through other pixels > t_low.
EdgeMap hysteresis(const RealPlane& thinned, double t_low, double t_up, int connectivity);

/// Everything up to and including NMS. None of it depends on the percentile
/// thresholds, so a threshold sweep can reuse one instance per image.
struct DetectionStages {
  LabImage lab;
  /// Per-(channel, scale) maps, channel-major, in `channel_ids` order.
  std::vector<EsmMap> channel_esms;
  std::vector<int> channel_ids;
  int scales = 0;
  EsmMap fused;
  OrientationMap orientation;
  EqualizedEsm equalized;
  RealPlane thinned;
};

DetectionStages compute_stages(const RgbImage& img, const DetectorConfig& cfg);

EdgeMap finish_detection(const DetectionStages& stages, double beta_low, double beta_up,
                         int connectivity);

EdgeMap detect_edges(const RgbImage& img, const DetectorConfig& cfg);

}  // namespace gaboredge
