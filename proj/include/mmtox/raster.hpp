// Copyright 2026 The mmtox Authors.
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

#pragma once

#include <png.h>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mmtox/core.hpp"
#include "mmtox/geometry.hpp"

namespace mmtox {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kWhite{255, 255, 255};

inline double luminance(Rgb c) { return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b; }

/// 8-bit RGB image, row-major.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = kBlack)
      : width_(width), height_(height),
        pixels_(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0) * 3) {
    this->fill(fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }
  BoundingBox bounds() const { return {0, 0, width_, height_}; }

  Rgb at(int x, int y) const {
    const auto* p = &pixels_[index(x, y)];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb c) {
    auto* p = &pixels_[index(x, y)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }
  /// Alpha-blends c over the pixel with coverage in [0, 255].
  void blend(int x, int y, Rgb c, int coverage) {
    if (coverage <= 0 || x < 0 || y < 0 || x >= width_ || y >= height_) return;
    if (coverage >= 255) return set(x, y, c);
    auto* p = &pixels_[index(x, y)];
    p[0] = static_cast<std::uint8_t>((p[0] * (255 - coverage) + c.r * coverage + 127) / 255);
    p[1] = static_cast<std::uint8_t>((p[1] * (255 - coverage) + c.g * coverage + 127) / 255);
    p[2] = static_cast<std::uint8_t>((p[2] * (255 - coverage) + c.b * coverage + 127) / 255);
  }

  void fill(Rgb c) {
    for (std::size_t i = 0; i + 2 < pixels_.size(); i += 3) {
      pixels_[i] = c.r;
      pixels_[i + 1] = c.g;
      pixels_[i + 2] = c.b;
    }
  }
  void fill_rect(const BoundingBox& r, Rgb c) {
    for (int y = std::max(r.y1, 0); y < std::min(r.y2, height_); ++y)
      for (int x = std::max(r.x1, 0); x < std::min(r.x2, width_); ++x) set(x, y, c);
  }

  /// Mean luminance over the region clipped to the image; 0 when empty.
  double mean_luminance(const BoundingBox& r) const {
    double sum = 0;
    std::int64_t n = 0;
    for (int y = std::max(r.y1, 0); y < std::min(r.y2, height_); ++y)
      for (int x = std::max(r.x1, 0); x < std::min(r.x2, width_); ++x, ++n) sum += luminance(at(x, y));
    return n ? sum / static_cast<double>(n) : 0.0;
  }

  /// Nearest-neighbour copy of src scaled into dst rect.
  void blit_scaled(const RgbImage& src, const BoundingBox& dst) {
    if (src.empty() || !dst.valid()) return;
    for (int y = std::max(dst.y1, 0); y < std::min(dst.y2, height_); ++y) {
      const int sy = static_cast<int>(static_cast<std::int64_t>(y - dst.y1) * src.height() / dst.height());
      for (int x = std::max(dst.x1, 0); x < std::min(dst.x2, width_); ++x) {
        const int sx = static_cast<int>(static_cast<std::int64_t>(x - dst.x1) * src.width() / dst.width());
        set(x, y, src.at(sx, sy));
      }
    }
  }

  const std::vector<std::uint8_t>& data() const { return pixels_; }
  std::vector<std::uint8_t>& data() { return pixels_; }

  bool operator==(const RgbImage&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Single-channel 8-bit image (coverage masks, glyph atlases).
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
  }
};

inline std::string png_encode(const RgbImage& img) {
  if (img.empty()) throw RenderError("cannot encode an empty image");
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.data().data(), 0, nullptr))
    throw RenderError(std::string("png sizing failed: ") + image.message);
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.data().data(), 0, nullptr))
    throw RenderError(std::string("png encode failed: ") + image.message);
  out.resize(size);
  return out;
}

namespace detail {

inline std::vector<std::uint8_t> png_decode_as(std::string_view bytes, png_uint_32 format, int& w,
                                               int& h) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw FormatError(std::string("not a PNG: ") + image.message);
  image.format = format;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw FormatError(std::string("PNG decode failed: ") + image.message);
  }
  w = static_cast<int>(image.width);
  h = static_cast<int>(image.height);
  return buf;
}

}  // namespace detail

inline RgbImage png_decode(std::string_view bytes) {
  int w = 0, h = 0;
  auto buf = detail::png_decode_as(bytes, PNG_FORMAT_RGB, w, h);
  RgbImage img(w, h);
  img.data() = std::move(buf);
  return img;
}

inline GrayImage png_decode_gray(std::string_view bytes) {
  GrayImage g;
  g.pixels = detail::png_decode_as(bytes, PNG_FORMAT_GRAY, g.width, g.height);
  return g;
}

inline RgbImage load_png(const std::filesystem::path& path) { return png_decode(read_file(path)); }

inline void save_png(const RgbImage& img, const std::filesystem::path& path) {
  write_file(path, png_encode(img));
}

}  // namespace mmtox
