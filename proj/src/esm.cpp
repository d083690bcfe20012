#include "gaboredge/esm.hpp"

#include <cmath>
#include <string>

namespace gaboredge {

namespace {

OrientationMap argmax_planes(std::span<const RealPlane> planes) {
  const int w = planes.front().width();
  const int h = planes.front().height();
  OrientationMap out{Plane<int>(w, h, 0), static_cast<int>(planes.size())};
  for (std::size_t i = 0; i < out.k_star.size(); ++i) {
    double best = planes[0].data()[i];
    int best_k = 0;
    for (std::size_t k = 1; k < planes.size(); ++k) {
      const double v = planes[k].data()[i];
      if (v > best) {
        best = v;
        best_k = static_cast<int>(k);
      }
    }
    out.k_star.data()[i] = best_k;
  }
  return out;
}

}  // namespace

ChannelEsm channel_esm_from_magnitudes(std::span<const RealPlane> magnitudes) {
  if (magnitudes.empty()) throw ParameterError("channel_esm: need at least one orientation");
  const int w = magnitudes.front().width();
  const int h = magnitudes.front().height();
  for (const auto& m : magnitudes) {
    if (!m.same_shape(w, h)) throw ParameterError("channel_esm: magnitude planes differ in size");
  }
  ChannelEsm out{EsmMap{RealPlane(w, h)}, argmax_planes(magnitudes)};
  for (std::size_t i = 0; i < out.esm.strength.size(); ++i) {
    out.esm.strength.data()[i] =
        magnitudes[out.orientation.k_star.data()[i]].data()[i];
  }
  return out;
}

ChannelEsm channel_esm(const RealPlane& channel, std::span<const GaborKernel> kernels) {
  if (kernels.empty()) throw ParameterError("channel_esm: need at least one kernel");
  const int scale = kernels.front().scale_index;
  std::vector<RealPlane> mags;
  mags.reserve(kernels.size());
  for (const auto& k : kernels) {
    if (k.scale_index != scale) {
      throw ParameterError("channel_esm: kernels must share one scale");
    }
    mags.push_back(convolve_magnitude(channel, k));
  }
  return channel_esm_from_magnitudes(mags);
}

EsmMap fuse(std::span<const EsmMap> esms) {
  if (esms.empty()) throw ParameterError("fuse: need at least one map");
  const int w = esms.front().width();
  const int h = esms.front().height();
  for (const auto& e : esms) {
    if (!e.strength.same_shape(w, h)) throw ParameterError("fuse: maps differ in size");
  }
  if (esms.size() == 1) return esms.front();

  const double inv_n = 1.0 / static_cast<double>(esms.size());
  EsmMap out{RealPlane(w, h)};
  for (std::size_t i = 0; i < out.strength.size(); ++i) {
    double prod = 1.0;
    for (const auto& e : esms) prod *= e.strength.data()[i];
    out.strength.data()[i] = prod > 0.0 ? std::pow(prod, inv_n) : 0.0;
  }
  return out;
}

double global_mean(const EsmMap& esm) {
  if (esm.strength.empty()) throw ParameterError("global_mean: empty map");
  double sum = 0.0;
  for (double v : esm.strength.data()) sum += v;
  return sum / static_cast<double>(esm.strength.size());
}

RealPlane local_mean(const EsmMap& esm, int window) {
  if (window < 3 || window % 2 == 0) {
    throw ParameterError("window must be odd and >= 3, got " + std::to_string(window));
  }
  const int w = esm.width();
  const int h = esm.height();
  const int r = window / 2;
  const RealPlane padded = mirror_pad(esm.strength, r);

  // Separable box sum: columns first, then rows.
  RealPlane vertical(padded.width(), h);
  for (int y = 0; y < h; ++y) {
    auto out = vertical.row(y);
    for (int dy = 0; dy < window; ++dy) {
      const auto in = padded.row(y + dy);
      for (int x = 0; x < padded.width(); ++x) out[x] += in[x];
    }
  }
  const double norm = 1.0 / (static_cast<double>(window) * window);
  RealPlane out(w, h);
  for (int y = 0; y < h; ++y) {
    const auto in = vertical.row(y);
    auto o = out.row(y);
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int dx = 0; dx < window; ++dx) s += in[x + dx];
      o[x] = s * norm;
    }
  }
  return out;
}

EqualizedEsm contrast_equalize(const EsmMap& esm, int window) {
  EqualizedEsm out;
  out.window = window;
  out.global_mean = global_mean(esm);
  const RealPlane local = local_mean(esm, window);
  out.strength = RealPlane(esm.width(), esm.height());
  if (!(out.global_mean > 0.0)) {
    out.degenerate = true;
    return out;
  }
  for (std::size_t i = 0; i < out.strength.size(); ++i) {
    out.strength.data()[i] =
        esm.strength.data()[i] / (out.global_mean + 0.5 * local.data()[i]);
  }
  return out;
}

OrientationEnergy::OrientationEnergy(int width, int height, int orientations)
    : width_(width), height_(height) {
  if (orientations < 1) throw ParameterError("orientations must be >= 1");
  sums_.assign(orientations, RealPlane(width, height));
}

void OrientationEnergy::add(std::span<const RealPlane> magnitudes) {
  if (magnitudes.size() != sums_.size()) {
    throw ParameterError("orientation count mismatch");
  }
  for (std::size_t k = 0; k < sums_.size(); ++k) {
    if (!magnitudes[k].same_shape(width_, height_)) {
      throw ParameterError("orientation energy: plane size mismatch");
    }
    auto& dst = sums_[k].data();
    const auto& src = magnitudes[k].data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
}

OrientationMap OrientationEnergy::argmax() const { return argmax_planes(sums_); }

OrientationMap fused_orientation(std::span<const std::vector<RealPlane>> stacks) {
  if (stacks.empty() || stacks.front().empty()) {
    throw ParameterError("fused_orientation: no planes");
  }
  const auto& first = stacks.front().front();
  OrientationEnergy energy(first.width(), first.height(),
                           static_cast<int>(stacks.front().size()));
  for (const auto& s : stacks) energy.add(s);
  return energy.argmax();
}

}  // namespace gaboredge
