#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaboredge/detector.hpp"
#include "gaboredge/eval.hpp"

namespace gaboredge {

struct EvalConfig {
  /// <= 0 selects the per-image default tolerance.
  double tolerance = 0.0;
  std::vector<GridPoint> grid = default_grid();

  static std::vector<GridPoint> default_grid();
  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

struct IoConfig {
  std::string input;
  std::string output;
  friend bool operator==(const IoConfig&, const IoConfig&) = default;
};

struct RunConfig {
  DetectorConfig detector;
  std::optional<NoiseSpec> noise;
  EvalConfig eval;
  IoConfig io;

  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Missing keys take defaults; unknown keys and type mismatches are errors.
/// Throws ParameterError whose message starts with the dotted field path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const GaborParams& p);
GaborParams parse_gabor(const nlohmann::json& j, const std::string& path = "gabor");

/// Either a bare array or {"grid": [...]}; points are [low, up] pairs or
/// {"beta_low": ..., "beta_up": ...} objects.
std::vector<GridPoint> parse_grid(const nlohmann::json& j, const std::string& path = "grid");

}  // namespace gaboredge
