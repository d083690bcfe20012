#pragma once

#include <span>
#include <vector>

#include "gaboredge/gabor.hpp"
#include "gaboredge/plane.hpp"

namespace gaboredge {

/// Nonnegative per-pixel edge strength.
struct EsmMap {
  RealPlane strength;
  int width() const { return strength.width(); }
  int height() const { return strength.height(); }
};

/// Per-pixel index of the winning orientation, in [0, orientations).
struct OrientationMap {
  Plane<int> k_star;
  int orientations = 1;
};

struct ChannelEsm {
  EsmMap esm;
  OrientationMap orientation;
};

/// Strength-normalized ESM plus the statistics that produced it.
struct EqualizedEsm {
  RealPlane strength;
  double global_mean = 0.0;
  int window = 0;
  /// Set when the input was identically zero; the output is then all zero.
  bool degenerate = false;
};

/// Max over orientations of |response|, argmax with the smallest index on ties.
/// All kernels must share one scale index.
ChannelEsm channel_esm(const RealPlane& channel, std::span<const GaborKernel> kernels);

/// Same reduction over precomputed magnitude planes, one per orientation.
ChannelEsm channel_esm_from_magnitudes(std::span<const RealPlane> magnitudes);

/// Per-pixel geometric mean (z_1 * ... * z_n)^(1/n). A zero anywhere yields zero.
EsmMap fuse(std::span<const EsmMap> esms);

double global_mean(const EsmMap& esm);

/// W x W box mean with mirror padding. Throws for even W or W < 3.
RealPlane local_mean(const EsmMap& esm, int window);

/// xi / (mean + 0.5 * local_mean).
EqualizedEsm contrast_equalize(const EsmMap& esm, int window);

/// Running per-orientation sum of magnitudes across channels and scales.
class OrientationEnergy {
 public:
  OrientationEnergy(int width, int height, int orientations);

  /// `magnitudes` holds one plane per orientation.
  void add(std::span<const RealPlane> magnitudes);

  /// Argmax over orientations of the accumulated sum, smallest index on ties.
  OrientationMap argmax() const;

 private:
  int width_;
  int height_;
  std::vector<RealPlane> sums_;
};

/// One orientation per pixel for the fused map: argmax over k of the sum of
/// |response| over every (channel, scale) stack. Each stack holds K planes.
OrientationMap fused_orientation(std::span<const std::vector<RealPlane>> stacks);

}  // namespace gaboredge
