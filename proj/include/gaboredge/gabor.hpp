#pragma once

#include <complex>
#include <span>
#include <vector>

#include "gaboredge/plane.hpp"

namespace gaboredge {

struct GaborParams {
  double gamma = 1.0;  // envelope sharpness along the carrier axis
  double eta = 2.0;    // envelope sharpness across the carrier axis
  std::vector<double> frequencies = {0.1, 0.2};  // cycles/pixel, one per scale
  int orientations = 8;
  double truncation = 3.0;  // envelope cut-off, in standard deviations
  int max_half_width = 128;

  /// Throws ParameterError naming the offending field.
  void validate() const;

  friend bool operator==(const GaborParams&, const GaborParams&) = default;
};

/// Sampled complex Gabor filter on a (2*half_width+1)^2 grid.
///
/// Tap (du, dv) holds the filter at horizontal offset du and vertical offset
/// dv. The grid is conjugate-symmetric: tap(-du, -dv) == conj(tap(du, dv))
/// bit for bit, which `convolve` relies on.
struct GaborKernel {
  int half_width = 0;
  int scale_index = 0;
  int orientation_index = 0;
  double frequency = 0.0;
  double theta = 0.0;
  std::vector<double> re;
  std::vector<double> im;

  int side() const { return 2 * half_width + 1; }
  std::size_t offset(int du, int dv) const {
    return static_cast<std::size_t>(dv + half_width) * side() + (du + half_width);
  }
  std::complex<double> tap(int du, int dv) const {
    const auto i = offset(du, dv);
    return {re[i], im[i]};
  }
};

/// Half width needed to keep the envelope above exp(-truncation^2 / 2).
int kernel_half_width(double frequency, double gamma, double eta, double truncation);

GaborKernel build_kernel(double frequency, double theta, double gamma, double eta,
                         double truncation = 3.0, int max_half_width = 128);

/// Kernels for every (scale, orientation) pair, scale-major.
struct GaborBank {
  GaborParams params;
  std::vector<GaborKernel> kernels;

  int scales() const { return static_cast<int>(params.frequencies.size()); }
  int orientations() const { return params.orientations; }
  const GaborKernel& at(int scale, int orientation) const {
    return kernels[static_cast<std::size_t>(scale) * orientations() + orientation];
  }
  std::span<const GaborKernel> scale(int s) const {
    return std::span<const GaborKernel>(kernels).subspan(
        static_cast<std::size_t>(s) * orientations(), orientations());
  }
};

/// Orientation angle pi*k/K.
double orientation_angle(int k, int orientations);

GaborBank build_bank(const GaborParams& params);

using ResponseMap = Plane<std::complex<double>>;

/// Discrete convolution sum_p I(z - p) * kernel(p) with symmetric mirror
/// padding; the output has the channel's dimensions.
ResponseMap convolve(const RealPlane& channel, const GaborKernel& kernel);

/// Same as `magnitude(convolve(channel, kernel))` without materializing the
/// complex response.
RealPlane convolve_magnitude(const RealPlane& channel, const GaborKernel& kernel);

RealPlane magnitude(const ResponseMap& resp);

}  // namespace gaboredge
