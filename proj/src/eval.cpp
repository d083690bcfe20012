#include "gaboredge/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>
#include <tuple>

namespace gaboredge {

namespace {

class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite; u2 in [0, 1).
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Squared distance transform of a sampled function along one line
// (lower envelope of parabolas).
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    double s;
    while (true) {
      const int p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
        if (k < 0) break;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = k == 0 ? -inf : s;
    z[k + 1] = inf;
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), inf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = q - v[j];
    d[q] = dq * dq + f[v[j]];
  }
}

double ratio_or_one(double num, double den) { return den > 0.0 ? num / den : 1.0; }

}  // namespace

RgbImage add_gaussian_noise(const RgbImage& img, const NoiseSpec& spec) {
  img.validate();
  if (!(spec.sigma >= 0.0)) throw ParameterError("noise.sigma must be >= 0");
  RgbImage out = img;
  if (spec.sigma == 0.0) return out;
  NormalSource normal(spec.seed);
  for (auto& s : out.data) {
    const double v = std::round(s + spec.sigma * normal.next());
    s = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return out;
}

double default_tolerance(int width, int height) {
  const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
  return std::max(1.0, std::ceil(0.0075 * diag));
}

MatchCounts match_edges(const EdgeMap& detected, const EdgeMap& gt, double tol) {
  if (!detected.same_shape(gt)) {
    throw ParameterError("match_edges: detected and ground-truth maps differ in size");
  }
  if (!(tol >= 0.0)) throw ParameterError("match_edges: tolerance must be >= 0");
  const int w = gt.width();
  const int h = gt.height();
  const int r = static_cast<int>(std::floor(tol));
  const double tol2 = tol * tol;

  // (squared distance, detected index, gt index)
  std::vector<std::tuple<int, std::size_t, std::size_t>> pairs;
  std::size_t n_det = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!detected(x, y)) continue;
      ++n_det;
      const std::size_t di = static_cast<std::size_t>(y) * w + x;
      for (int gy = std::max(0, y - r); gy <= std::min(h - 1, y + r); ++gy) {
        for (int gx = std::max(0, x - r); gx <= std::min(w - 1, x + r); ++gx) {
          if (!gt(gx, gy)) continue;
          const int d2 = (gx - x) * (gx - x) + (gy - y) * (gy - y);
          if (d2 <= tol2) pairs.emplace_back(d2, di, static_cast<std::size_t>(gy) * w + gx);
        }
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());

  std::vector<std::uint8_t> det_used(gt.size(), 0), gt_used(gt.size(), 0);
  std::size_t matched = 0;
  for (const auto& [d2, di, gi] : pairs) {
    if (det_used[di] || gt_used[gi]) continue;
    det_used[di] = gt_used[gi] = 1;
    ++matched;
  }
  const std::size_t n_gt = count_edges(gt);
  return {matched, n_det - matched, matched, n_gt - matched};
}

PrecisionRecall precision_recall(const MatchCounts& c) {
  const std::size_t n_det = c.tp + c.fp;
  const std::size_t n_gt = c.mt + c.um;
  const bool both_empty = n_det == 0 && n_gt == 0;
  PrecisionRecall pr;
  pr.precision = n_det > 0 ? static_cast<double>(c.tp) / n_det : (both_empty ? 1.0 : 0.0);
  pr.recall = n_gt > 0 ? static_cast<double>(c.mt) / n_gt : (both_empty ? 1.0 : 0.0);
  return pr;
}

double f_measure(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

RealPlane squared_distance_transform(const EdgeMap& features) {
  const int w = features.width();
  const int h = features.height();
  constexpr double inf = std::numeric_limits<double>::infinity();
  RealPlane out(w, h, inf);
  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);

  f.resize(h);
  d.resize(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = features(x, y) ? 0.0 : inf;
    edt_1d(f, d, v, z);
    for (int y = 0; y < h; ++y) out(x, y) = d[y];
  }
  f.resize(w);
  d.resize(w);
  for (int y = 0; y < h; ++y) {
    auto row = out.row(y);
    std::copy(row.begin(), row.end(), f.begin());
    edt_1d(f, d, v, z);
    std::copy(d.begin(), d.end(), row.begin());
  }
  return out;
}

double fom(const EdgeMap& detected, const EdgeMap& gt) {
  if (!detected.same_shape(gt)) throw ParameterError("fom: maps differ in size");
  const std::size_t n_g = count_edges(gt);
  if (n_g == 0) throw ParameterError("fom: ground truth has no edge pixels");
  const std::size_t n_e = count_edges(detected);
  if (n_e == 0) return 0.0;
  const RealPlane d2 = squared_distance_transform(gt);
  double sum = 0.0;
  for (std::size_t i = 0; i < detected.size(); ++i) {
    if (detected.data()[i]) sum += 1.0 / (1.0 + 0.25 * d2.data()[i]);
  }
  return sum / static_cast<double>(std::max(n_g, n_e));
}

double average_precision(std::span<const PrPoint> points) {
  if (points.empty()) return 0.0;
  std::vector<std::pair<double, double>> rp;  // (recall, precision)
  for (const auto& p : points) rp.emplace_back(p.recall, p.precision);
  std::sort(rp.begin(), rp.end(), [](auto a, auto b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  for (std::size_t i = rp.size() - 1; i-- > 0;) {
    rp[i].second = std::max(rp[i].second, rp[i + 1].second);
  }
  double area = 0.0;
  double prev_r = 0.0;
  double prev_p = rp.front().second;
  for (const auto& [r, p] : rp) {
    area += (r - prev_r) * 0.5 * (p + prev_p);
    prev_r = r;
    prev_p = p;
  }
  return std::clamp(area, 0.0, 1.0);
}

double recall_at_half_precision(std::span<const PrPoint> points) {
  if (points.empty()) return 0.0;
  std::vector<std::pair<double, double>> rp;
  for (const auto& p : points) rp.emplace_back(p.recall, p.precision);
  std::sort(rp.begin(), rp.end(), [](auto a, auto b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  for (std::size_t i = rp.size() - 1; i-- > 0;) {
    rp[i].second = std::max(rp[i].second, rp[i + 1].second);
  }
  std::size_t last = rp.size();
  for (std::size_t i = 0; i < rp.size(); ++i) {
    if (rp[i].second >= 0.5) last = i;
  }
  if (last == rp.size()) return 0.0;
  if (last + 1 == rp.size()) return rp[last].first;
  const auto [r0, p0] = rp[last];
  const auto [r1, p1] = rp[last + 1];
  return r0 + (p0 - 0.5) / (p0 - p1) * (r1 - r0);
}

EvalSummary summarize(const std::vector<std::vector<MatchCounts>>& counts,
                      std::span<const GridPoint> grid) {
  if (grid.empty()) throw ParameterError("summarize: empty grid");
  if (counts.empty()) throw ParameterError("summarize: empty dataset");
  const std::size_t ng = grid.size();
  for (const auto& row : counts) {
    if (row.size() != ng) throw ParameterError("summarize: count table has wrong width");
    for (const auto& c : row) {
      if (c.tp != c.mt) throw ParameterError("summarize: counts must satisfy tp == mt");
    }
  }

  EvalSummary out;
  out.table.resize(ng);
  for (std::size_t g = 0; g < ng; ++g) {
    MatchCounts pooled;
    for (const auto& row : counts) pooled += row[g];
    const auto pr = precision_recall(pooled);
    out.table[g] = {grid[g], pooled, pr.precision, pr.recall, f_measure(pr.precision, pr.recall)};
  }
  for (std::size_t g = 0; g < ng; ++g) {
    if (out.table[g].f > out.table[out.ods_index].f) out.ods_index = g;
  }
  out.f_ods = out.table[out.ods_index].f;
  out.ap = average_precision(out.table);
  out.r50 = recall_at_half_precision(out.table);

  // With tp == mt, pooled F = 2 tp / (n_det + n_gt): a ratio of sums over
  // images. The per-image choice maximizing it is found by Dinkelbach
  // iteration starting from the best common grid point, so the result can
  // never fall below F_ODS.
  auto num = [&](std::size_t i, std::size_t g) { return 2.0 * counts[i][g].tp; };
  auto den = [&](std::size_t i, std::size_t g) {
    const auto& c = counts[i][g];
    return static_cast<double>(c.tp + c.fp + c.mt + c.um);
  };
  const std::size_t n_img = counts.size();
  std::vector<std::size_t> choice(n_img, out.ods_index);

  bool all_can_be_empty = true;
  std::vector<std::size_t> empty_choice(n_img, 0);
  for (std::size_t i = 0; i < n_img && all_can_be_empty; ++i) {
    bool found = false;
    for (std::size_t g = 0; g < ng && !found; ++g) {
      if (den(i, g) == 0.0) {
        empty_choice[i] = g;
        found = true;
      }
    }
    all_can_be_empty = found;
  }

  double lambda;
  if (all_can_be_empty) {
    choice = empty_choice;
    lambda = 1.0;
  } else {
    auto pooled_ratio = [&](const std::vector<std::size_t>& ch) {
      double a = 0.0, b = 0.0;
      for (std::size_t i = 0; i < n_img; ++i) {
        a += num(i, ch[i]);
        b += den(i, ch[i]);
      }
      return ratio_or_one(a, b);
    };
    lambda = pooled_ratio(choice);
    for (int iter = 0; iter < 1000; ++iter) {
      std::vector<std::size_t> next(n_img);
      for (std::size_t i = 0; i < n_img; ++i) {
        std::size_t best = choice[i];
        double best_val = num(i, best) - lambda * den(i, best);
        for (std::size_t g = 0; g < ng; ++g) {
          const double val = num(i, g) - lambda * den(i, g);
          if (val > best_val + 1e-12) {
            best_val = val;
            best = g;
          }
        }
        next[i] = best;
      }
      const double next_lambda = pooled_ratio(next);
      if (!(next_lambda > lambda + 1e-15)) break;
      choice = std::move(next);
      lambda = next_lambda;
    }
  }
  out.f_ois = std::max(lambda, out.f_ods);

  out.per_image.resize(n_img);
  for (std::size_t i = 0; i < n_img; ++i) {
    const auto pr = precision_recall(counts[i][choice[i]]);
    out.per_image[i] = {choice[i], pr.precision, pr.recall, f_measure(pr.precision, pr.recall)};
  }
  return out;
}

EvalSummary pr_sweep(std::span<const DatasetItem> dataset, std::span<const GridPoint> grid,
                     const DetectorConfig& cfg, const SweepOptions& opts) {
  if (dataset.empty()) throw ParameterError("pr_sweep: empty dataset");
  if (grid.empty()) throw ParameterError("pr_sweep: empty grid");
  cfg.validate();
  for (const auto& g : grid) {
    if (!(g.beta_low > 0.0 && g.beta_low < g.beta_up && g.beta_up < 1.0)) {
      throw ParameterError("grid point must satisfy 0 < beta_low < beta_up < 1");
    }
  }
  for (const auto& item : dataset) {
    if (!item.gt.same_shape(item.image.width, item.image.height)) {
      throw ParameterError("ground truth for '" + item.name + "' differs in size from the image");
    }
  }

  std::vector<std::vector<MatchCounts>> counts(dataset.size(),
                                               std::vector<MatchCounts>(grid.size()));
  auto evaluate = [&](std::size_t i) {
    const auto& item = dataset[i];
    RgbImage img = item.image;
    if (opts.noise) {
      NoiseSpec spec = *opts.noise;
      spec.seed += i;
      img = add_gaussian_noise(img, spec);
    }
    const double tol =
        opts.tolerance > 0.0 ? opts.tolerance : default_tolerance(img.width, img.height);
    const DetectionStages stages = compute_stages(img, cfg);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const EdgeMap edges =
          finish_detection(stages, grid[g].beta_low, grid[g].beta_up, cfg.connectivity);
      counts[i][g] = match_edges(edges, item.gt, tol);
    }
  };

  const int jobs = std::clamp<int>(opts.jobs, 1, static_cast<int>(dataset.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < dataset.size(); ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> workers;
      for (int t = 0; t < jobs; ++t) {
        workers.emplace_back([&] {
          for (std::size_t i = next++; i < dataset.size(); i = next++) {
            try {
              evaluate(i);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return summarize(counts, grid);
}

}  // namespace gaboredge
