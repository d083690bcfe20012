#include "gaboredge/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gaboredge {

void GaborParams::validate() const {
  if (!(gamma > 0.0)) throw ParameterError("gabor.gamma must be > 0");
  if (!(eta > 0.0)) throw ParameterError("gabor.eta must be > 0");
  if (orientations < 1) throw ParameterError("gabor.orientations must be >= 1");
  if (!(truncation > 0.0)) throw ParameterError("gabor.truncation must be > 0");
  if (frequencies.empty()) throw ParameterError("gabor.frequencies must not be empty");
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (!(frequencies[i] > 0.0)) {
      throw ParameterError("gabor.frequencies[" + std::to_string(i) + "] must be > 0");
    }
    if (i > 0 && !(frequencies[i] > frequencies[i - 1])) {
      throw ParameterError("gabor.frequencies must be strictly increasing");
    }
  }
}

int kernel_half_width(double frequency, double gamma, double eta, double truncation) {
  // exp(-f^2 x^2 / g^2) >= exp(-t^2 / 2)  <=>  |x| <= t * g / (f * sqrt 2)
  const double reach = truncation * std::max(gamma, eta) / (frequency * std::numbers::sqrt2);
  return static_cast<int>(std::ceil(reach));
}

GaborKernel build_kernel(double frequency, double theta, double gamma, double eta,
                         double truncation, int max_half_width) {
  if (!(frequency > 0.0)) throw ParameterError("frequency must be > 0");
  if (!(gamma > 0.0) || !(eta > 0.0)) throw ParameterError("gamma and eta must be > 0");
  if (!(truncation > 0.0)) throw ParameterError("truncation must be > 0");
  const double reach = truncation * std::max(gamma, eta) / (frequency * std::numbers::sqrt2);
  if (!(reach <= max_half_width)) {
    throw ParameterError("kernel half width for f=" + std::to_string(frequency) +
                         " exceeds the cap of " + std::to_string(max_half_width));
  }

  GaborKernel k;
  k.half_width = static_cast<int>(std::ceil(reach));
  k.frequency = frequency;
  k.theta = theta;
  const std::size_t n = static_cast<std::size_t>(k.side()) * k.side();
  k.re.assign(n, 0.0);
  k.im.assign(n, 0.0);

  const double amp = frequency * frequency / (std::numbers::pi * gamma * eta);
  const double ax = frequency * frequency / (gamma * gamma);
  const double ay = frequency * frequency / (eta * eta);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const int hw = k.half_width;

  // Fill the half plane (dv > 0, or dv == 0 and du >= 0) and mirror it so
  // the grid is exactly conjugate-symmetric.
  for (int dv = 0; dv <= hw; ++dv) {
    for (int du = (dv == 0 ? 0 : -hw); du <= hw; ++du) {
      const double xr = du * c + dv * s;
      const double yr = -du * s + dv * c;
      const double env = amp * std::exp(-(ax * xr * xr + ay * yr * yr));
      const double phase = 2.0 * std::numbers::pi * frequency * xr;
      const double re = env * std::cos(phase);
      const double im = (du == 0 && dv == 0) ? 0.0 : env * std::sin(phase);
      k.re[k.offset(du, dv)] = re;
      k.im[k.offset(du, dv)] = im;
      k.re[k.offset(-du, -dv)] = re;
      k.im[k.offset(-du, -dv)] = -im;
    }
  }
  return k;
}

double orientation_angle(int k, int orientations) {
  return std::numbers::pi * k / orientations;
}

GaborBank build_bank(const GaborParams& params) {
  params.validate();
  GaborBank bank{params, {}};
  bank.kernels.reserve(params.frequencies.size() * params.orientations);
  for (std::size_t s = 0; s < params.frequencies.size(); ++s) {
    for (int k = 0; k < params.orientations; ++k) {
      auto kernel = build_kernel(params.frequencies[s], orientation_angle(k, params.orientations),
                                 params.gamma, params.eta, params.truncation,
                                 params.max_half_width);
      kernel.scale_index = static_cast<int>(s);
      kernel.orientation_index = k;
      bank.kernels.push_back(std::move(kernel));
    }
  }
  return bank;
}

namespace {

// Accumulates real and imaginary responses into separate planes. Taps are
// visited in pairs (p, -p): I(z-p) phi(p) + I(z+p) conj(phi(p)) =
// re(p) (a + b) + i im(p) (a - b), halving the multiply count.
void convolve_planes(const RealPlane& channel, const GaborKernel& kernel, RealPlane& out_re,
                     RealPlane& out_im) {
  if (channel.empty()) throw ParameterError("convolve: empty channel");
  const int w = channel.width();
  const int h = channel.height();
  const int hw = kernel.half_width;
  const RealPlane padded = mirror_pad(channel, hw);
  out_re = RealPlane(w, h);
  out_im = RealPlane(w, h);

  const double center = kernel.re[kernel.offset(0, 0)];
  for (int y = 0; y < h; ++y) {
    double* acc_re = out_re.row(y).data();
    double* acc_im = out_im.row(y).data();
    const double* mid = padded.row(y + hw).data() + hw;
    for (int x = 0; x < w; ++x) acc_re[x] = center * mid[x];

    for (int dv = 0; dv <= hw; ++dv) {
      const double* minus_row = padded.row(y - dv + hw).data() + hw;
      const double* plus_row = padded.row(y + dv + hw).data() + hw;
      for (int du = (dv == 0 ? 1 : -hw); du <= hw; ++du) {
        const auto t = kernel.offset(du, dv);
        const double tr = kernel.re[t];
        const double ti = kernel.im[t];
        const double* a = minus_row - du;
        const double* b = plus_row + du;
        for (int x = 0; x < w; ++x) {
          acc_re[x] += tr * (a[x] + b[x]);
          acc_im[x] += ti * (a[x] - b[x]);
        }
      }
    }
  }
}

}  // namespace

ResponseMap convolve(const RealPlane& channel, const GaborKernel& kernel) {
  RealPlane re, im;
  convolve_planes(channel, kernel, re, im);
  ResponseMap out(channel.width(), channel.height());
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = {re.data()[i], im.data()[i]};
  return out;
}

RealPlane convolve_magnitude(const RealPlane& channel, const GaborKernel& kernel) {
  RealPlane re, im;
  convolve_planes(channel, kernel, re, im);
  for (std::size_t i = 0; i < re.size(); ++i) {
    const double r = re.data()[i];
    const double q = im.data()[i];
    re.data()[i] = std::sqrt(r * r + q * q);
  }
  return re;
}

RealPlane magnitude(const ResponseMap& resp) {
  RealPlane out(resp.width(), resp.height());
  for (std::size_t i = 0; i < resp.size(); ++i) {
    const auto z = resp.data()[i];
    out.data()[i] = std::sqrt(z.real() * z.real() + z.imag() * z.imag());
  }
  return out;
}

}  // namespace gaboredge
