#include "gaboredge/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

namespace gaboredge {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParameterError(path + ": " + what);
}

void require_object(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, _] : j.items()) {
    if (!keys.contains(k)) fail(path + "." + k, "unknown key");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

template <typename T, typename Getter>
void read_opt(const json& obj, const char* key, const std::string& path, T& out, Getter get) {
  if (auto it = obj.find(key); it != obj.end()) out = get(*it, path + "." + key);
}

GridPoint parse_grid_point(const json& j, const std::string& path) {
  GridPoint g;
  if (j.is_array()) {
    if (j.size() != 2) fail(path, "expected [beta_low, beta_up]");
    g.beta_low = get_number(j[0], path + "[0]");
    g.beta_up = get_number(j[1], path + "[1]");
  } else {
    require_object(j, path, {"beta_low", "beta_up"});
    if (!j.contains("beta_low") || !j.contains("beta_up")) fail(path, "needs beta_low and beta_up");
    g.beta_low = get_number(j["beta_low"], path + ".beta_low");
    g.beta_up = get_number(j["beta_up"], path + ".beta_up");
  }
  if (!(g.beta_low > 0.0 && g.beta_low < g.beta_up && g.beta_up < 1.0)) {
    fail(path, "beta_low and beta_up must satisfy 0 < beta_low < beta_up < 1");
  }
  return g;
}

const char* to_string(NmsInterpolation m) {
  return m == NmsInterpolation::linear ? "linear" : "nearest";
}
const char* to_string(NmsDirection d) {
  return d == NmsDirection::carrier_plus_90 ? "carrier+90" : "carrier";
}

DetectorConfig parse_detector(const json& j, const std::string& path) {
  require_object(j, path,
                 {"gabor", "window", "beta_low", "beta_up", "connectivity", "nms_interpolation",
                  "nms_direction", "channels", "srgb_gamma"});
  DetectorConfig d;
  if (auto it = j.find("gabor"); it != j.end()) d.gabor = parse_gabor(*it, path + ".gabor");
  read_opt(j, "window", path, d.window, get_int);
  read_opt(j, "beta_low", path, d.beta_low, get_number);
  read_opt(j, "beta_up", path, d.beta_up, get_number);
  read_opt(j, "connectivity", path, d.connectivity, get_int);
  read_opt(j, "srgb_gamma", path, d.srgb_gamma, get_bool);
  if (auto it = j.find("nms_interpolation"); it != j.end()) {
    const auto s = get_string(*it, path + ".nms_interpolation");
    if (s == "nearest") d.nms_interpolation = NmsInterpolation::nearest;
    else if (s == "linear") d.nms_interpolation = NmsInterpolation::linear;
    else fail(path + ".nms_interpolation", "expected \"nearest\" or \"linear\"");
  }
  if (auto it = j.find("nms_direction"); it != j.end()) {
    const auto s = get_string(*it, path + ".nms_direction");
    if (s == "carrier") d.nms_direction = NmsDirection::carrier;
    else if (s == "carrier+90") d.nms_direction = NmsDirection::carrier_plus_90;
    else fail(path + ".nms_direction", "expected \"carrier\" or \"carrier+90\"");
  }
  if (auto it = j.find("channels"); it != j.end()) {
    const std::string cp = path + ".channels";
    if (!it->is_array()) fail(cp, "expected an array of \"L\", \"a\", \"b\"");
    d.channels = {false, false, false};
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto s = get_string((*it)[i], cp + "[" + std::to_string(i) + "]");
      if (s == "L") d.channels.l = true;
      else if (s == "a") d.channels.a = true;
      else if (s == "b") d.channels.b = true;
      else fail(cp + "[" + std::to_string(i) + "]", "expected \"L\", \"a\" or \"b\"");
    }
  }
  if (!(d.beta_low > 0.0 && d.beta_low < d.beta_up && d.beta_up < 1.0)) {
    fail(path + ".beta_low/" + path + ".beta_up",
         "beta_low (" + std::to_string(d.beta_low) + ") and beta_up (" +
             std::to_string(d.beta_up) + ") must satisfy 0 < beta_low < beta_up < 1");
  }
  d.validate();
  return d;
}

}  // namespace

std::vector<GridPoint> EvalConfig::default_grid() {
  return {{0.50, 0.75}, {0.60, 0.80}, {0.65, 0.85}, {0.70, 0.90},
          {0.75, 0.93}, {0.80, 0.95}, {0.85, 0.97}, {0.90, 0.98}};
}

void RunConfig::validate() const {
  detector.validate();
  if (noise && !(noise->sigma >= 0.0)) fail("noise.sigma", "must be >= 0");
  if (eval.grid.empty()) fail("eval.grid", "must not be empty");
  if (!io.input.empty() && !std::filesystem::exists(io.input)) {
    fail("io.input", "file not found: " + io.input);
  }
}

GaborParams parse_gabor(const json& j, const std::string& path) {
  require_object(j, path,
                 {"gamma", "eta", "frequencies", "orientations", "truncation", "max_half_width"});
  GaborParams p;
  read_opt(j, "gamma", path, p.gamma, get_number);
  read_opt(j, "eta", path, p.eta, get_number);
  read_opt(j, "orientations", path, p.orientations, get_int);
  read_opt(j, "truncation", path, p.truncation, get_number);
  read_opt(j, "max_half_width", path, p.max_half_width, get_int);
  if (auto it = j.find("frequencies"); it != j.end()) {
    if (!it->is_array()) fail(path + ".frequencies", "expected an array of numbers");
    p.frequencies.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
      p.frequencies.push_back(
          get_number((*it)[i], path + ".frequencies[" + std::to_string(i) + "]"));
    }
  }
  try {
    p.validate();
  } catch (const ParameterError& e) {
    // Messages from validate() start with "gabor."; re-root them at `path`.
    std::string msg = e.what();
    if (msg.rfind("gabor.", 0) == 0) msg = path + msg.substr(5);
    throw ParameterError(msg);
  }
  return p;
}

std::vector<GridPoint> parse_grid(const json& j, const std::string& path) {
  const json* arr = &j;
  std::string p = path;
  if (j.is_object()) {
    require_object(j, path, {"grid"});
    if (!j.contains("grid")) fail(path, "expected a \"grid\" array");
    arr = &j["grid"];
    p = path + ".grid";
  }
  if (!arr->is_array() || arr->empty()) fail(p, "expected a nonempty array");
  std::vector<GridPoint> out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    out.push_back(parse_grid_point((*arr)[i], p + "[" + std::to_string(i) + "]"));
  }
  return out;
}

RunConfig parse_config(const json& j) {
  require_object(j, "config", {"detector", "noise", "eval", "io"});
  RunConfig cfg;
  if (auto it = j.find("detector"); it != j.end()) cfg.detector = parse_detector(*it, "detector");
  if (auto it = j.find("noise"); it != j.end() && !it->is_null()) {
    require_object(*it, "noise", {"sigma", "seed"});
    NoiseSpec n;
    read_opt(*it, "sigma", "noise", n.sigma, get_number);
    if (auto s = it->find("seed"); s != it->end()) {
      if (!s->is_number_unsigned()) fail("noise.seed", "expected a nonnegative integer");
      n.seed = s->get<std::uint64_t>();
    }
    cfg.noise = n;
  }
  if (auto it = j.find("eval"); it != j.end()) {
    require_object(*it, "eval", {"tolerance", "grid"});
    read_opt(*it, "tolerance", "eval", cfg.eval.tolerance, get_number);
    if (auto g = it->find("grid"); g != it->end()) cfg.eval.grid = parse_grid(*g, "eval.grid");
  }
  if (auto it = j.find("io"); it != j.end()) {
    require_object(*it, "io", {"input", "output"});
    read_opt(*it, "input", "io", cfg.io.input, get_string);
    read_opt(*it, "output", "io", cfg.io.output, get_string);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParameterError("config: malformed JSON in '" + path.string() + "': " + e.what());
  }
  return parse_config(j);
}

json to_json(const GaborParams& p) {
  return {{"gamma", p.gamma},
          {"eta", p.eta},
          {"frequencies", p.frequencies},
          {"orientations", p.orientations},
          {"truncation", p.truncation},
          {"max_half_width", p.max_half_width}};
}

json to_json(const RunConfig& cfg) {
  const auto& d = cfg.detector;
  json channels = json::array();
  if (d.channels.l) channels.push_back("L");
  if (d.channels.a) channels.push_back("a");
  if (d.channels.b) channels.push_back("b");
  json grid = json::array();
  for (const auto& g : cfg.eval.grid) grid.push_back({{"beta_low", g.beta_low}, {"beta_up", g.beta_up}});

  json j = {
      {"detector",
       {{"gabor", to_json(d.gabor)},
        {"window", d.window},
        {"beta_low", d.beta_low},
        {"beta_up", d.beta_up},
        {"connectivity", d.connectivity},
        {"nms_interpolation", to_string(d.nms_interpolation)},
        {"nms_direction", to_string(d.nms_direction)},
        {"channels", channels},
        {"srgb_gamma", d.srgb_gamma}}},
      {"eval", {{"tolerance", cfg.eval.tolerance}, {"grid", grid}}},
      {"io", {{"input", cfg.io.input}, {"output", cfg.io.output}}},
  };
  j["noise"] = cfg.noise ? json{{"sigma", cfg.noise->sigma}, {"seed", cfg.noise->seed}} : json();
  return j;
}

}  // namespace gaboredge
