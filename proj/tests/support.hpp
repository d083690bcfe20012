#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "gaboredge/plane.hpp"

namespace testing {

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("gaboredge_test_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline gaboredge::RealPlane random_plane(int w, int h, std::mt19937_64& rng, double lo = -50.0,
                                         double hi = 50.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  gaboredge::RealPlane p(w, h);
  for (auto& v : p.data()) v = d(rng);
  return p;
}

inline gaboredge::EdgeMap random_edges(int w, int h, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution on(density);
  gaboredge::EdgeMap e(w, h, 0);
  for (auto& v : e.data()) v = on(rng);
  return e;
}

}  // namespace testing
