#include "gaboredge/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "gaboredge/config.hpp"
#include "gaboredge/detector.hpp"
#include "gaboredge/eval.hpp"
#include "gaboredge/image_io.hpp"

namespace gaboredge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct DetectorFlags {
  std::optional<double> beta_low, beta_up, gamma, eta;
  std::optional<int> orientations, window, connectivity;
  std::vector<double> frequencies;
  std::optional<std::string> channels;
  std::optional<std::string> nms_direction;
  bool srgb_gamma = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--beta-low", beta_low, "lower percentile in (0,1)");
    cmd->add_option("--beta-up", beta_up, "upper percentile in (0,1)");
    cmd->add_option("--orientations", orientations, "orientation count K");
    cmd->add_option("--frequencies", frequencies, "center frequencies, e.g. 0.1,0.2")
        ->delimiter(',');
    cmd->add_option("--gamma", gamma, "envelope sharpness along the carrier");
    cmd->add_option("--eta", eta, "envelope sharpness across the carrier");
    cmd->add_option("--window", window, "local-mean window (odd)");
    cmd->add_option("--connectivity", connectivity, "4 or 8");
    cmd->add_option("--channels", channels, "subset of Lab, e.g. L or ab");
    cmd->add_option("--nms-direction", nms_direction, "carrier or carrier+90");
    cmd->add_flag("--srgb-gamma", srgb_gamma, "linearize sRGB before the matrix");
  }

  void apply(DetectorConfig& d) const {
    if (beta_low) d.beta_low = *beta_low;
    if (beta_up) d.beta_up = *beta_up;
    if (gamma) d.gabor.gamma = *gamma;
    if (eta) d.gabor.eta = *eta;
    if (orientations) d.gabor.orientations = *orientations;
    if (!frequencies.empty()) d.gabor.frequencies = frequencies;
    if (window) d.window = *window;
    if (connectivity) d.connectivity = *connectivity;
    if (srgb_gamma) d.srgb_gamma = true;
    if (channels) {
      d.channels = {false, false, false};
      for (char c : *channels) {
        if (c == 'L') d.channels.l = true;
        else if (c == 'a') d.channels.a = true;
        else if (c == 'b') d.channels.b = true;
        else throw ParameterError("--channels: expected letters from \"Lab\"");
      }
    }
    if (nms_direction) {
      if (*nms_direction == "carrier") d.nms_direction = NmsDirection::carrier;
      else if (*nms_direction == "carrier+90") d.nms_direction = NmsDirection::carrier_plus_90;
      else throw ParameterError("--nms-direction: expected carrier or carrier+90");
    }
    d.validate();
  }
};

struct Globals {
  std::string config_path;
  int jobs = 1;
  bool verbose = false;
};

RunConfig base_config(const Globals& g) {
  return g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
}

std::string require_path(const std::string& flag_value, const std::string& config_value,
                         const char* flag) {
  if (!flag_value.empty()) return flag_value;
  if (!config_value.empty()) return config_value;
  throw ParameterError(std::string(flag) + " is required");
}

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

std::vector<DatasetItem> load_dataset(const fs::path& image_dir, const fs::path& gt_dir) {
  if (!fs::is_directory(image_dir)) throw IoError("not a directory: " + image_dir.string());
  if (!fs::is_directory(gt_dir)) throw IoError("not a directory: " + gt_dir.string());
  std::vector<fs::path> images;
  for (const auto& e : fs::directory_iterator(image_dir)) {
    if (e.is_regular_file() && is_image_file(e.path())) images.push_back(e.path());
  }
  std::sort(images.begin(), images.end());
  if (images.empty()) throw IoError("no images in " + image_dir.string());

  std::map<std::string, fs::path> gts;
  for (const auto& e : fs::directory_iterator(gt_dir)) {
    if (e.is_regular_file() && is_image_file(e.path())) {
      const auto stem = e.path().stem().string();
      if (!gts.contains(stem) || e.path() < gts[stem]) gts[stem] = e.path();
    }
  }
  std::vector<DatasetItem> out;
  for (const auto& p : images) {
    const auto stem = p.stem().string();
    auto it = gts.find(stem);
    if (it == gts.end()) throw IoError("no ground truth for '" + stem + "' in " + gt_dir.string());
    out.push_back({stem, read_rgb(p), read_edge_map(it->second)});
  }
  return out;
}

std::string format_fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int cmd_detect(const Globals& g, const std::string& input, const std::string& output,
               const DetectorFlags& flags, std::ostream& err) {
  RunConfig cfg = base_config(g);
  flags.apply(cfg.detector);
  const auto in = require_path(input, cfg.io.input, "--input");
  const auto outp = require_path(output, cfg.io.output, "--output");
  RgbImage img = read_rgb(in);
  if (cfg.noise) img = add_gaussian_noise(img, *cfg.noise);
  const DetectionStages st = compute_stages(img, cfg.detector);
  if (st.equalized.degenerate && g.verbose) err << "warning: edge strength is zero everywhere\n";
  const EdgeMap edges =
      finish_detection(st, cfg.detector.beta_low, cfg.detector.beta_up, cfg.detector.connectivity);
  write_edge_png(outp, edges);
  if (g.verbose) err << "detect: " << count_edges(edges) << " edge pixels -> " << outp << "\n";
  return kOk;
}

int cmd_eval(const Globals& g, const std::string& pred, const std::string& gt_path,
             std::optional<double> tol, const std::string& out_path, std::ostream& out) {
  const RunConfig cfg = base_config(g);
  const EdgeMap detected = read_edge_map(pred);
  const EdgeMap gt = read_edge_map(gt_path);
  if (!detected.same_shape(gt)) {
    throw ParameterError("prediction and ground truth differ in size");
  }
  double t = tol ? *tol : cfg.eval.tolerance;
  if (t <= 0.0) t = default_tolerance(gt.width(), gt.height());
  const MatchCounts c = match_edges(detected, gt, t);
  const auto pr = precision_recall(c);
  json j = {{"precision", pr.precision},
            {"recall", pr.recall},
            {"f", f_measure(pr.precision, pr.recall)},
            {"fom", count_edges(gt) > 0 ? json(fom(detected, gt)) : json()},
            {"tolerance", t},
            {"counts", {{"tp", c.tp}, {"fp", c.fp}, {"mt", c.mt}, {"um", c.um}}}};
  const std::string text = j.dump(2) + "\n";
  if (!out_path.empty()) write_file_atomic(out_path, text);
  out << text;
  return kOk;
}

int cmd_sweep(const Globals& g, const std::string& dataset_dir, const std::string& gt_dir,
              const std::string& grid_path, const std::string& out_path,
              const std::string& summary_path, std::optional<double> tol,
              const DetectorFlags& flags, std::ostream& err) {
  RunConfig cfg = base_config(g);
  flags.apply(cfg.detector);
  std::vector<GridPoint> grid = cfg.eval.grid;
  if (!grid_path.empty()) {
    std::ifstream in(grid_path);
    if (!in) throw IoError("cannot open grid '" + grid_path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ParameterError("grid: malformed JSON: " + std::string(e.what()));
    }
    grid = parse_grid(j);
  }
  const auto dataset = load_dataset(dataset_dir, gt_dir);
  SweepOptions opts;
  opts.jobs = g.jobs;
  opts.tolerance = tol ? *tol : cfg.eval.tolerance;
  opts.noise = cfg.noise;
  if (g.verbose) {
    err << "sweep: " << dataset.size() << " images x " << grid.size() << " grid points\n";
  }
  const EvalSummary s = pr_sweep(dataset, grid, cfg.detector, opts);

  std::string csv = "beta_low,beta_up,precision,recall,f\n";
  for (const auto& p : s.table) {
    csv += format_fixed(p.params.beta_low) + "," + format_fixed(p.params.beta_up) + "," +
           format_fixed(p.precision) + "," + format_fixed(p.recall) + "," + format_fixed(p.f) +
           "\n";
  }
  json images = json::array();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& b = s.per_image[i];
    images.push_back({{"name", dataset[i].name},
                      {"beta_low", grid[b.grid_index].beta_low},
                      {"beta_up", grid[b.grid_index].beta_up},
                      {"precision", b.precision},
                      {"recall", b.recall},
                      {"f", b.f}});
  }
  json summary = {{"f_ods", s.f_ods},
                  {"f_ois", s.f_ois},
                  {"ap", s.ap},
                  {"r50", s.r50},
                  {"ods_beta_low", grid[s.ods_index].beta_low},
                  {"ods_beta_up", grid[s.ods_index].beta_up},
                  {"images", images}};
  fs::path summary_file = summary_path;
  if (summary_file.empty()) summary_file = fs::path(out_path).replace_extension(".json");
  write_file_atomic(out_path, csv);
  write_file_atomic(summary_file, summary.dump(2) + "\n");
  if (g.verbose) {
    err << "sweep: F_ODS " << s.f_ods << "  F_OIS " << s.f_ois << "  AP " << s.ap << "  R50 "
        << s.r50 << "\n";
  }
  return kOk;
}

int cmd_noise(const Globals& g, const std::string& input, const std::string& output,
              std::optional<double> sigma, std::optional<std::uint64_t> seed) {
  const RunConfig cfg = base_config(g);
  NoiseSpec spec = cfg.noise.value_or(NoiseSpec{});
  if (sigma) spec.sigma = *sigma;
  if (seed) spec.seed = *seed;
  const auto in = require_path(input, cfg.io.input, "--input");
  const auto outp = require_path(output, cfg.io.output, "--output");
  write_rgb(outp, add_gaussian_noise(read_rgb(in), spec));
  return kOk;
}

void dump_map(const fs::path& png, const RealPlane& values, json meta) {
  double max_v = 0.0;
  for (double v : values.data()) max_v = std::max(max_v, v);
  const double scale = max_v > 0.0 ? 65535.0 / max_v : 1.0;
  Plane<std::uint16_t> img(values.width(), values.height());
  for (std::size_t i = 0; i < values.size(); ++i) {
    img.data()[i] = static_cast<std::uint16_t>(
        std::clamp(std::lround(values.data()[i] * scale), 0L, 65535L));
  }
  write_gray16_png(png, img);
  meta["scale"] = scale;
  meta["max"] = max_v;
  meta["width"] = values.width();
  meta["height"] = values.height();
  meta["note"] = "stored = round(value * scale)";
  fs::path sidecar = png;
  sidecar.replace_extension(".json");
  write_file_atomic(sidecar, meta.dump(2) + "\n");
}

int cmd_esm_dump(const Globals& g, const std::string& input, const std::string& out_dir,
                 const DetectorFlags& flags, std::ostream& err) {
  RunConfig cfg = base_config(g);
  flags.apply(cfg.detector);
  const auto in = require_path(input, cfg.io.input, "--input");
  if (out_dir.empty()) throw ParameterError("--out-dir is required");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + out_dir + "'");

  RgbImage img = read_rgb(in);
  if (cfg.noise) img = add_gaussian_noise(img, *cfg.noise);
  const DetectionStages st = compute_stages(img, cfg.detector);
  static constexpr const char* kNames[] = {"L", "a", "b"};
  std::size_t idx = 0;
  for (int c : st.channel_ids) {
    for (int s = 0; s < st.scales; ++s, ++idx) {
      const std::string name = std::string("esm_") + kNames[c] + "_s" + std::to_string(s);
      dump_map(fs::path(out_dir) / (name + ".png"), st.channel_esms[idx].strength,
               {{"channel", kNames[c]},
                {"scale_index", s},
                {"frequency", cfg.detector.gabor.frequencies[s]}});
    }
  }
  dump_map(fs::path(out_dir) / "esm_fused.png", st.fused.strength,
           {{"channel", "fused"}, {"inputs", st.channel_esms.size()}});
  if (g.verbose) err << "esm-dump: wrote " << idx + 1 << " maps to " << out_dir << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Color edge detection with a multi-scale Gabor bank", "gaboredge"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "JSON run configuration");
  app.add_option("--jobs", g.jobs, "worker threads for sweep")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", g.verbose, "log progress to stderr");

  std::string input, output, pred, gt, out_dir, dataset_dir, gt_dir, grid_path, report, summary;
  std::optional<double> tol, sigma;
  std::optional<std::uint64_t> seed;
  DetectorFlags detect_flags, sweep_flags, dump_flags;

  auto* detect = app.add_subcommand("detect", "detect edges in one image");
  detect->add_option("--input", input, "input PNG/PPM");
  detect->add_option("--output", output, "edge map PNG (255 = edge)");
  detect_flags.attach(detect);

  auto* eval = app.add_subcommand("eval", "score an edge map against ground truth");
  eval->add_option("--pred", pred, "predicted edge map")->required();
  eval->add_option("--gt", gt, "ground-truth edge map")->required();
  eval->add_option("--tol", tol, "matching tolerance in pixels");
  eval->add_option("--out", report, "also write the JSON report here");

  auto* sweep = app.add_subcommand("sweep", "precision/recall sweep over a dataset");
  sweep->add_option("--dataset", dataset_dir, "directory of input images")->required();
  sweep->add_option("--gt-dir", gt_dir, "directory of ground-truth maps (same stems)")
      ->required();
  sweep->add_option("--grid", grid_path, "JSON list of [beta_low, beta_up] pairs");
  sweep->add_option("--out", report, "CSV report path")->required();
  sweep->add_option("--summary", summary, "summary JSON path (default: report with .json)");
  sweep->add_option("--tol", tol, "matching tolerance in pixels");
  sweep_flags.attach(sweep);

  auto* noise = app.add_subcommand("noise", "add seeded Gaussian noise to an image");
  noise->add_option("--input", input, "input PNG/PPM");
  noise->add_option("--output", output, "output PNG/PPM");
  noise->add_option("--sigma", sigma, "standard deviation in gray levels");
  noise->add_option("--seed", seed, "generator seed");

  auto* dump = app.add_subcommand("esm-dump", "write per-channel, per-scale and fused maps");
  dump->add_option("--input", input, "input PNG/PPM");
  dump->add_option("--out-dir", out_dir, "output directory");
  dump_flags.attach(dump);

  std::vector<const char*> argv{"gaboredge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParameterError;
  }

  try {
    if (detect->parsed()) return cmd_detect(g, input, output, detect_flags, err);
    if (eval->parsed()) return cmd_eval(g, pred, gt, tol, report, out);
    if (sweep->parsed()) {
      return cmd_sweep(g, dataset_dir, gt_dir, grid_path, report, summary, tol, sweep_flags, err);
    }
    if (noise->parsed()) return cmd_noise(g, input, output, sigma, seed);
    if (dump->parsed()) return cmd_esm_dump(g, input, out_dir, dump_flags, err);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kParameterError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kParameterError;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace gaboredge::cli
