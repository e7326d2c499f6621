// Copyright 2026 The hazeorder Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hazeorder/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "hazeorder/error.hpp"

namespace hazeorder {
namespace {

namespace fs = std::filesystem;

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::kIo, "read error on '" + path.string() + "'");
  return bytes;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot create '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "write error on '" + path.string() + "'");
}

// Re-throws an error with the offending path prepended.
template <typename F>
auto with_path(const fs::path& path, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    const std::string prefix = path.string() + ": ";
    if (std::string_view(e.what()).starts_with(prefix)) throw;
    throw Error(e.code(), prefix + e.what());
  }
}

// PNG ------------------------------------------------------------------------

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

bool is_png(std::span<const std::uint8_t> b) {
  return b.size() >= 8 && std::memcmp(b.data(), kPngSignature, 8) == 0;
}

struct PngRaster {
  int width = 0;
  int height = 0;
  int channels = 0;   // after alpha stripping: 1 or 3
  int bit_depth = 8;  // 8 or 16; 16-bit samples are big-endian pairs
  std::vector<std::uint8_t> pixels;
};

struct MemoryReader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

struct PngErrorSink {
  std::jmp_buf jump;
  char message[256];
};

void png_error_fn(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof sink->message, "%s", msg);
  std::longjmp(sink->jump, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

void png_read_fn(png_structp png, png_bytep out, png_size_t len) {
  auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (r->size - r->pos < len) png_error(png, "truncated PNG data");
  std::memcpy(out, r->data + r->pos, len);
  r->pos += len;
}

// Fills `out`; returns false with sink.message set on a libpng error.
// Only trivially destructible locals live across the setjmp.
bool decode_png_impl(std::span<const std::uint8_t> bytes, bool keep16,
                     PngRaster& out, std::vector<png_bytep>& rows,
                     PngErrorSink& sink) {
  MemoryReader reader{bytes.data(), bytes.size(), 0};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink,
                                           png_error_fn, png_warning_fn);
  if (png == nullptr) {
    std::snprintf(sink.message, sizeof sink.message, "out of memory");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    std::snprintf(sink.message, sizeof sink.message, "out of memory");
    return false;
  }
  if (setjmp(sink.jump)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &reader, png_read_fn);
  png_read_info(png, info);

  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (depth == 16 && !keep16) png_set_strip_16(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  out.pixels.resize(row_bytes * out.height);
  rows.resize(out.height);
  for (int y = 0; y < out.height; ++y) rows[y] = out.pixels.data() + y * row_bytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

PngRaster decode_png(std::span<const std::uint8_t> bytes, bool keep16) {
  PngRaster raster;
  std::vector<png_bytep> rows;
  PngErrorSink sink{};
  if (!decode_png_impl(bytes, keep16, raster, rows, sink)) {
    fail(ErrorCode::kIo, std::string("corrupt PNG: ") + sink.message);
  }
  return raster;
}

void png_write_fn(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void png_flush_fn(png_structp) {}

bool encode_png_impl(int width, int height, int color_type, int bit_depth,
                     std::vector<png_bytep>& rows,
                     std::vector<std::uint8_t>& out, PngErrorSink& sink) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink,
                                            png_error_fn, png_warning_fn);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(sink.jump)) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, &out, png_write_fn, png_flush_fn);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

std::vector<std::uint8_t> encode_png_raw(int width, int height, int channels,
                                         int bit_depth,
                                         std::span<const std::uint8_t> data) {
  int color_type = 0;
  switch (channels) {
    case 1: color_type = PNG_COLOR_TYPE_GRAY; break;
    case 2: color_type = PNG_COLOR_TYPE_GRAY_ALPHA; break;
    case 3: color_type = PNG_COLOR_TYPE_RGB; break;
    case 4: color_type = PNG_COLOR_TYPE_RGB_ALPHA; break;
    default: fail(ErrorCode::kUnsupported, "PNG writer needs 1-4 channels");
  }
  const std::size_t row_bytes =
      static_cast<std::size_t>(width) * channels * (bit_depth / 8);
  if (data.size() != row_bytes * height) {
    fail(ErrorCode::kStructural, "PNG writer: buffer length mismatch");
  }
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(data.data() + y * row_bytes);
  }
  std::vector<std::uint8_t> out;
  PngErrorSink sink{};
  if (!encode_png_impl(width, height, color_type, bit_depth, rows, out, sink)) {
    fail(ErrorCode::kIo, std::string("PNG encode failed: ") + sink.message);
  }
  return out;
}

// PNM / PFM headers ----------------------------------------------------------

// Minimal tokenizer over a netpbm-style header.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> b) : b_(b) {}

  std::string token() {
    skip_space_and_comments();
    std::string t;
    while (pos_ < b_.size() && !std::isspace(b_[pos_])) t.push_back(static_cast<char>(b_[pos_++]));
    if (t.empty()) fail(ErrorCode::kIo, "truncated header");
    return t;
  }

  long integer() {
    const std::string t = token();
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end == t.c_str() || *end != '\0') fail(ErrorCode::kIo, "bad header value '" + t + "'");
    return v;
  }

  double real() {
    const std::string t = token();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') fail(ErrorCode::kIo, "bad header value '" + t + "'");
    return v;
  }

  // The single whitespace byte that terminates the header.
  std::size_t data_offset() {
    if (pos_ >= b_.size() || !std::isspace(b_[pos_])) fail(ErrorCode::kIo, "truncated header");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (std::isspace(b_[pos_])) {
        ++pos_;
      } else if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

bool is_pnm(std::span<const std::uint8_t> b) {
  return b.size() >= 2 && b[0] == 'P' && (b[1] == '5' || b[1] == '6');
}

PlanarImage decode_pnm(std::span<const std::uint8_t> bytes) {
  HeaderReader hdr(bytes);
  const std::string magic = hdr.token();
  const int channels = magic == "P6" ? 3 : 1;
  const long w = hdr.integer();
  const long h = hdr.integer();
  const long maxval = hdr.integer();
  if (w < 1 || h < 1 || w > (1 << 20) || h > (1 << 20)) {
    fail(ErrorCode::kIo, "bad PNM dimensions");
  }
  if (maxval != 255) {
    fail(ErrorCode::kUnsupported, "only maxval 255 PNM is supported, got " +
                                      std::to_string(maxval));
  }
  const std::size_t offset = hdr.data_offset();
  const std::size_t need = static_cast<std::size_t>(w) * h * channels;
  if (bytes.size() < offset + need) fail(ErrorCode::kIo, "truncated PNM pixel data");
  return from_bytes(bytes.subspan(offset, need), static_cast<int>(w),
                    static_cast<int>(h), channels);
}

ScalarMap decode_pfm(std::span<const std::uint8_t> bytes) {
  HeaderReader hdr(bytes);
  const std::string magic = hdr.token();
  if (magic == "PF") fail(ErrorCode::kUnsupported, "color PFM is not a depth map");
  if (magic != "Pf") fail(ErrorCode::kIo, "not a PFM file");
  const long w = hdr.integer();
  const long h = hdr.integer();
  const double scale = hdr.real();
  if (w < 1 || h < 1 || w > (1 << 20) || h > (1 << 20)) {
    fail(ErrorCode::kIo, "bad PFM dimensions");
  }
  if (scale == 0.0) fail(ErrorCode::kIo, "PFM scale must be nonzero");
  const std::size_t offset = hdr.data_offset();
  const std::size_t count = static_cast<std::size_t>(w) * h;
  if (bytes.size() < offset + count * 4) fail(ErrorCode::kIo, "truncated PFM data");
  const bool little = scale < 0.0;
  ScalarMap m(static_cast<int>(w), static_cast<int>(h));
  for (long row = 0; row < h; ++row) {
    const int y = static_cast<int>(h - 1 - row);  // stored bottom-up
    for (long x = 0; x < w; ++x) {
      const std::uint8_t* p = bytes.data() + offset + (row * w + x) * 4;
      std::uint32_t bits = little ? (p[0] | p[1] << 8 | p[2] << 16 |
                                     static_cast<std::uint32_t>(p[3]) << 24)
                                  : (p[3] | p[2] << 8 | p[1] << 16 |
                                     static_cast<std::uint32_t>(p[0]) << 24);
      m(static_cast<int>(x), y) = std::bit_cast<float>(bits);
    }
  }
  return m;
}

void validate_depth(const ScalarMap& d) {
  for (double v : d.data()) {
    if (!std::isfinite(v)) fail(ErrorCode::kValidation, "depth map has non-finite values");
    if (v < 0.0) fail(ErrorCode::kValidation, "depth map has negative values");
  }
}

std::vector<std::uint8_t> gray_bytes(const ScalarMap& m, double lo, double hi) {
  std::vector<std::uint8_t> bytes(m.size());
  const double span = hi - lo;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double v = span > 0.0 ? (m[i] - lo) / span : 0.0;
    bytes[i] = quantize(std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0);
  }
  return bytes;
}

}  // namespace

PlanarImage decode_image(std::span<const std::uint8_t> bytes) {
  if (is_png(bytes)) {
    const PngRaster r = decode_png(bytes, /*keep16=*/false);
    if (r.channels != 1 && r.channels != 3) {
      fail(ErrorCode::kUnsupported, "unexpected PNG channel count");
    }
    return from_bytes(r.pixels, r.width, r.height, r.channels);
  }
  if (is_pnm(bytes)) return decode_pnm(bytes);
  fail(ErrorCode::kUnsupported, "unrecognized image format (expected PNG, P5 or P6)");
}

PlanarImage read_image(const fs::path& path) {
  return with_path(path, [&] { return decode_image(read_file(path)); });
}

std::vector<std::uint8_t> encode_png(const PlanarImage& img) {
  const std::vector<std::uint8_t> raw = to_bytes(img);
  return encode_png_raw(img.width(), img.height(), img.channels(), 8, raw);
}

void write_png(const fs::path& path, const PlanarImage& img) {
  with_path(path, [&] { write_file(path, encode_png(img)); });
}

void write_pnm(const fs::path& path, const PlanarImage& img) {
  with_path(path, [&] {
    std::ostringstream hdr;
    hdr << (img.channels() == 3 ? "P6" : "P5") << "\n"
        << img.width() << " " << img.height() << "\n255\n";
    const std::string h = hdr.str();
    std::vector<std::uint8_t> bytes(h.begin(), h.end());
    const std::vector<std::uint8_t> raw = to_bytes(img);
    bytes.insert(bytes.end(), raw.begin(), raw.end());
    write_file(path, bytes);
  });
}

void write_png_bytes(const fs::path& path, int width, int height, int channels,
                     std::span<const std::uint8_t> interleaved) {
  with_path(path, [&] {
    write_file(path, encode_png_raw(width, height, channels, 8, interleaved));
  });
}

void write_png16(const fs::path& path, int width, int height,
                 std::span<const std::uint16_t> samples) {
  with_path(path, [&] {
    std::vector<std::uint8_t> be(samples.size() * 2);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      be[2 * i] = static_cast<std::uint8_t>(samples[i] >> 8);
      be[2 * i + 1] = static_cast<std::uint8_t>(samples[i] & 0xff);
    }
    write_file(path, encode_png_raw(width, height, 1, 16, be));
  });
}

ScalarMap read_pfm(const fs::path& path) {
  return with_path(path, [&] { return decode_pfm(read_file(path)); });
}

ScalarMap read_depth(const fs::path& path, double depth_scale) {
  return with_path(path, [&] {
    if (!(depth_scale > 0.0) || !std::isfinite(depth_scale)) {
      fail(ErrorCode::kConfig, "depth scale must be positive");
    }
    const std::vector<std::uint8_t> bytes = read_file(path);
    ScalarMap d;
    if (is_png(bytes)) {
      const PngRaster r = decode_png(bytes, /*keep16=*/true);
      if (r.channels != 1 || r.bit_depth != 16) {
        fail(ErrorCode::kUnsupported, "depth PNG must be 16-bit grayscale");
      }
      d = ScalarMap(r.width, r.height);
      for (std::size_t i = 0; i < d.size(); ++i) {
        const unsigned raw = (r.pixels[2 * i] << 8) | r.pixels[2 * i + 1];
        d[i] = raw / 65535.0 * depth_scale;
      }
    } else if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == 'f' || bytes[1] == 'F')) {
      d = decode_pfm(bytes);
    } else {
      fail(ErrorCode::kUnsupported, "depth must be a 16-bit PNG or PFM");
    }
    validate_depth(d);
    return d;
  });
}

void write_pfm(const fs::path& path, const ScalarMap& m) {
  with_path(path, [&] {
    std::ostringstream hdr;
    hdr << "Pf\n" << m.width() << " " << m.height() << "\n-1.0\n";
    const std::string h = hdr.str();
    std::vector<std::uint8_t> bytes(h.begin(), h.end());
    bytes.reserve(bytes.size() + m.size() * 4);
    for (int row = 0; row < m.height(); ++row) {
      const int y = m.height() - 1 - row;
      for (int x = 0; x < m.width(); ++x) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(m(x, y)));
        for (int k = 0; k < 4; ++k) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
      }
    }
    write_file(path, bytes);
  });
}

void write_map_png(const fs::path& path, const ScalarMap& m) {
  double lo = 0.0, hi = 0.0;
  bool seen = false;
  for (double v : m.data()) {
    if (!std::isfinite(v)) continue;
    lo = seen ? std::min(lo, v) : v;
    hi = seen ? std::max(hi, v) : v;
    seen = true;
  }
  write_png_bytes(path, m.width(), m.height(), 1, gray_bytes(m, lo, hi));
}

void write_unit_map_png(const fs::path& path, const ScalarMap& m) {
  write_png_bytes(path, m.width(), m.height(), 1, gray_bytes(m, 0.0, 1.0));
}

}  // namespace hazeorder
