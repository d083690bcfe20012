#include "gaboredge/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

namespace gaboredge {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return bytes;
}

struct MemoryReader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t n) {
  auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (r->pos + n > r->size) png_error(png, "truncated PNG stream");
  std::memcpy(out, r->data + r->pos, n);
  r->pos += n;
}

void png_write_to_vector(png_structp png, png_bytep data, png_size_t n) {
  auto* v = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  v->insert(v->end(), data, data + n);
}

void png_flush_noop(png_structp) {}

// Keeps libpng quiet on stderr; the message travels in the exception instead.
void png_error_capture(png_structp png, png_const_charp msg) {
  if (auto* where = static_cast<std::string*>(png_get_error_ptr(png))) *where = msg;
  png_longjmp(png, 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

RasterImage decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  std::string why;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &why, png_error_capture,
                                           png_warning_ignore);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng init failed");
  }
  MemoryReader reader{bytes.data(), bytes.size(), 0};
  RasterImage out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("malformed PNG '" + name + "': " + why);
  }
  png_set_read_fn(png, &reader, png_read_from_memory);
  png_read_png(png, info,
               PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_STRIP_ALPHA | PNG_TRANSFORM_PACKING,
               nullptr);
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.bit_depth = png_get_bit_depth(png, info);
  out.channels = png_get_channels(png, info);
  png_bytepp rows = png_get_rows(png, info);
  const std::size_t per_row = static_cast<std::size_t>(out.width) * out.channels;
  out.samples.resize(per_row * out.height);
  for (int y = 0; y < out.height; ++y) {
    const png_bytep row = rows[y];
    auto* dst = out.samples.data() + per_row * y;
    if (out.bit_depth == 16) {
      for (std::size_t i = 0; i < per_row; ++i) {
        dst[i] = static_cast<std::uint16_t>((row[2 * i] << 8) | row[2 * i + 1]);
      }
    } else {
      for (std::size_t i = 0; i < per_row; ++i) dst[i] = row[i];
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (out.channels != 1 && out.channels != 3) {
    throw IoError("unsupported PNG channel layout in '" + name + "'");
  }
  return out;
}

class PnmParser {
 public:
  PnmParser(const std::vector<std::uint8_t>& bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  RasterImage parse() {
    if (bytes_.size() < 2 || bytes_[0] != 'P' || (bytes_[1] != '5' && bytes_[1] != '6')) {
      fail("not a binary PGM/PPM");
    }
    RasterImage out;
    out.channels = bytes_[1] == '6' ? 3 : 1;
    pos_ = 2;
    out.width = static_cast<int>(number());
    out.height = static_cast<int>(number());
    const long maxval = number();
    if (out.width <= 0 || out.height <= 0 || maxval <= 0 || maxval > 65535) fail("bad header");
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail("bad header");
    ++pos_;
    out.bit_depth = maxval > 255 ? 16 : 8;
    const std::size_t count = static_cast<std::size_t>(out.width) * out.height * out.channels;
    const std::size_t bytes_per = out.bit_depth == 16 ? 2 : 1;
    if (bytes_.size() - pos_ < count * bytes_per) fail("truncated pixel data");
    out.samples.resize(count);
    const long target = out.bit_depth == 16 ? 65535 : 255;
    for (std::size_t i = 0; i < count; ++i) {
      long v = bytes_per == 2 ? (bytes_[pos_ + 2 * i] << 8) | bytes_[pos_ + 2 * i + 1]
                              : bytes_[pos_ + i];
      if (maxval != target) v = (v * target + maxval / 2) / maxval;
      out.samples[i] = static_cast<std::uint16_t>(std::min(v, target));
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const char* what) const {
    throw IoError("malformed PNM '" + name_ + "': " + what);
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long number() {
    skip_space_and_comments();
    long v = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (++digits > 9) fail("number too large");
    }
    if (digits == 0) fail("expected a number");
    return v;
  }

  const std::vector<std::uint8_t>& bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

}  // namespace

RasterImage read_raster(const fs::path& path) {
  const auto bytes = slurp(path);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) {
    return decode_png(bytes, path.string());
  }
  if (bytes.size() >= 2 && bytes[0] == 'P') return PnmParser(bytes, path.string()).parse();
  throw IoError("unsupported image format '" + path.string() + "' (expected PNG, PGM or PPM)");
}

RgbImage read_rgb(const fs::path& path) {
  const RasterImage r = read_raster(path);
  RgbImage out(r.width, r.height);
  const int shift = r.bit_depth == 16 ? 8 : 0;
  const std::size_t n = static_cast<std::size_t>(r.width) * r.height;
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      const auto s = r.samples[i * r.channels + (r.channels == 3 ? c : 0)];
      out.data[i * 3 + c] = static_cast<std::uint8_t>(s >> shift);
    }
  }
  return out;
}

EdgeMap read_edge_map(const fs::path& path) {
  const RasterImage r = read_raster(path);
  EdgeMap out(r.width, r.height, 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    bool on = false;
    for (int c = 0; c < r.channels; ++c) on = on || r.samples[i * r.channels + c] != 0;
    out.data()[i] = on ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
  if (img.channels != 1 && img.channels != 3) throw ParameterError("encode_png: 1 or 3 channels");
  if (img.bit_depth != 8 && img.bit_depth != 16) throw ParameterError("encode_png: 8 or 16 bits");
  if (img.width <= 0 || img.height <= 0 ||
      img.samples.size() != static_cast<std::size_t>(img.width) * img.height * img.channels) {
    throw ParameterError("encode_png: sample count mismatch");
  }
  const std::size_t per_row = static_cast<std::size_t>(img.width) * img.channels;
  const std::size_t bytes_per = img.bit_depth / 8;
  std::vector<std::uint8_t> packed(per_row * bytes_per * img.height);
  for (std::size_t i = 0; i < img.samples.size(); ++i) {
    if (bytes_per == 2) {
      packed[2 * i] = static_cast<std::uint8_t>(img.samples[i] >> 8);
      packed[2 * i + 1] = static_cast<std::uint8_t>(img.samples[i] & 0xff);
    } else {
      packed[i] = static_cast<std::uint8_t>(img.samples[i]);
    }
  }
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) rows[y] = packed.data() + per_row * bytes_per * y;

  std::vector<std::uint8_t> out;
  std::string why;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &why, png_error_capture,
                                            png_warning_ignore);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed: " + why);
  }
  png_set_write_fn(png, &out, png_write_to_vector, png_flush_noop);
  png_set_IHDR(png, info, img.width, img.height, img.bit_depth,
               img.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_rows(png, info, rows.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  img.validate();
  const std::string header =
      "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data.begin(), img.data.end());
  return out;
}

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::random_device rd;
  const fs::path tmp =
      dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd() & 0xffffff));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for '" + path.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

void write_file_atomic(const fs::path& path, const std::string& text) {
  write_file_atomic(path, std::span<const std::uint8_t>(
                              reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void write_rgb(const fs::path& path, const RgbImage& img) {
  img.validate();
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".ppm") {
    write_file_atomic(path, encode_ppm(img));
    return;
  }
  RasterImage r{img.width, img.height, 3, 8, {img.data.begin(), img.data.end()}};
  write_file_atomic(path, encode_png(r));
}

void write_edge_png(const fs::path& path, const EdgeMap& edges) {
  RasterImage r{edges.width(), edges.height(), 1, 8, {}};
  r.samples.reserve(edges.size());
  for (auto v : edges.data()) r.samples.push_back(v ? 255 : 0);
  write_file_atomic(path, encode_png(r));
}

void write_gray16_png(const fs::path& path, const Plane<std::uint16_t>& img) {
  RasterImage r{img.width(), img.height(), 1, 16, img.data()};
  write_file_atomic(path, encode_png(r));
}

}  // namespace gaboredge
