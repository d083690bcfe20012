#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gaboredge/plane.hpp"

namespace gaboredge {

/// Decoded raster before any color interpretation.
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 0;   // 1 (gray) or 3 (RGB)
  int bit_depth = 8;  // 8 or 16
  std::vector<std::uint16_t> samples;
};

/// PNG, binary PGM (P5) or binary PPM (P6), detected from the file header.
/// Throws IoError on unreadable or malformed files.
RasterImage read_raster(const std::filesystem::path& path);

/// Gray inputs are replicated into three channels; 16-bit samples are scaled
/// down to 8 bits.
RgbImage read_rgb(const std::filesystem::path& path);

/// Nonzero in any channel marks an edge pixel.
EdgeMap read_edge_map(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const RasterImage& img);
std::vector<std::uint8_t> encode_ppm(const RgbImage& img);

/// Writes via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

/// PNG unless the extension is .ppm.
void write_rgb(const std::filesystem::path& path, const RgbImage& img);

/// 8-bit PNG, 255 = edge, 0 = background.
void write_edge_png(const std::filesystem::path& path, const EdgeMap& edges);

void write_gray16_png(const std::filesystem::path& path, const Plane<std::uint16_t>& img);

}  // namespace gaboredge
