#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaboredge/detector.hpp"
#include "gaboredge/plane.hpp"

namespace gaboredge {

struct NoiseSpec {
  double sigma = 15.0;  // gray levels on the 0-255 scale
  std::uint64_t seed = 42;
  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// Adds independent N(0, sigma^2) to every sample, rounds, clamps to [0, 255].
///
/// Deviates come from std::mt19937_64 seeded with `spec.seed`, converted to
/// uniforms with 53-bit mantissas and paired through Box-Muller, so output is
/// reproducible on any conforming platform. Samples are visited row-major,
/// R then G then B.
RgbImage add_gaussian_noise(const RgbImage& img, const NoiseSpec& spec);

struct MatchCounts {
  std::size_t tp = 0;  // matched detections
  std::size_t fp = 0;  // unmatched detections
  std::size_t mt = 0;  // matched ground-truth pixels
  std::size_t um = 0;  // unmatched ground-truth pixels

  MatchCounts& operator+=(const MatchCounts& o) {
    tp += o.tp;
    fp += o.fp;
    mt += o.mt;
    um += o.um;
    return *this;
  }
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

/// ceil(0.0075 * diagonal), at least 1 pixel.
double default_tolerance(int width, int height);

/// One-to-one matching: repeatedly pair the closest unmatched (detected, gt)
/// pixels whose Euclidean distance is <= tol. Ties break on row-major index of
/// the detected pixel, then of the gt pixel.
MatchCounts match_edges(const EdgeMap& detected, const EdgeMap& gt, double tol);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

/// Empty denominators give 1 when both maps are empty and 0 otherwise.
PrecisionRecall precision_recall(const MatchCounts& c);

/// Harmonic mean; 0 when p + r = 0.
double f_measure(double p, double r);

/// Squared Euclidean distance from every pixel to the nearest nonzero pixel
/// of `features` (+inf when there is none).
RealPlane squared_distance_transform(const EdgeMap& features);

/// Pratt's figure of merit. Throws ParameterError for empty ground truth.
double fom(const EdgeMap& detected, const EdgeMap& gt);

struct GridPoint {
  double beta_low = 0.0;
  double beta_up = 0.0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct PrPoint {
  GridPoint params;
  MatchCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

struct ImageBest {
  std::size_t grid_index = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

struct EvalSummary {
  double f_ods = 0.0;
  double f_ois = 0.0;
  double ap = 0.0;
  double r50 = 0.0;
  std::size_t ods_index = 0;
  std::vector<PrPoint> table;      // dataset-pooled, one per grid point
  std::vector<ImageBest> per_image;
};

/// counts[i][g]: image i at grid point g. Every entry must have tp == mt,
/// which one-to-one matching guarantees.
EvalSummary summarize(const std::vector<std::vector<MatchCounts>>& counts,
                      std::span<const GridPoint> grid);

/// Trapezoidal area under the precision envelope (running max from high recall
/// down), extended flat to recall 0.
double average_precision(std::span<const PrPoint> points);

/// Largest recall on the precision envelope at which precision >= 0.5, with
/// linear interpolation where the envelope crosses 0.5. 0 if never reached.
double recall_at_half_precision(std::span<const PrPoint> points);

struct DatasetItem {
  std::string name;
  RgbImage image;
  EdgeMap gt;
};

struct SweepOptions {
  /// Matching radius; <= 0 selects default_tolerance per image.
  double tolerance = 0.0;
  int jobs = 1;
  /// Applied to every image, with seed + image index as the per-image seed.
  std::optional<NoiseSpec> noise;
};

/// Evaluates the detector at every grid point on every image.
EvalSummary pr_sweep(std::span<const DatasetItem> dataset, std::span<const GridPoint> grid,
                     const DetectorConfig& cfg, const SweepOptions& opts = {});

}  // namespace gaboredge
