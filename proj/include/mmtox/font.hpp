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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mmtox/core.hpp"
#include "mmtox/geometry.hpp"
#include "mmtox/raster.hpp"

namespace mmtox {

struct TextExtent {
  int width = 0;
  int height = 0;
  std::int64_t area() const { return static_cast<std::int64_t>(width) * height; }
};

/// Advance-box metrics of single-line text at an integer font size.
class FontMetrics {
 public:
  virtual ~FontMetrics() = default;
  virtual int advance(char32_t cp, int size) const = 0;
  virtual int line_height(int size) const = 0;

  TextExtent measure(std::u32string_view text, int size) const {
    TextExtent e{0, line_height(size)};
    for (char32_t cp : text) e.width += advance(cp, size);
    return e;
  }
  TextExtent measure(std::string_view text, int size) const { return measure(utf8_decode(text), size); }
};

/// Every glyph is size x 2*size pixels.
class MonospaceMetrics final : public FontMetrics {
 public:
  int advance(char32_t, int size) const override { return size; }
  int line_height(int size) const override { return 2 * size; }
};

/// Half-width glyphs are size x 2*size, wide (CJK) glyphs 2*size x 2*size.
class CellMetrics : public FontMetrics {
 public:
  int advance(char32_t cp, int size) const override { return is_wide(cp) ? 2 * size : size; }
  int line_height(int size) const override { return 2 * size; }
};

/// Text broken into lines that fit a width.
struct TextLayout {
  int font_size = 0;
  std::vector<std::u32string> lines;
  TextExtent extent;
};

/// Greedy line breaking at spaces and between wide characters. A unit wider
/// than max_width is kept whole on its own line, so the extent can exceed
/// max_width; callers shrink the size in that case. max_width <= 0 disables
/// wrapping.
inline TextLayout layout_text(std::u32string_view text, int size, int max_width,
                              const FontMetrics& metrics) {
  struct Unit {
    std::u32string text;
    bool space_before = false;
  };
  std::vector<Unit> units;
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == U' ' || text[i] == U'\t' || text[i] == U'\n') {
      pending_space = true;
      ++i;
      continue;
    }
    Unit u{{}, pending_space && !units.empty()};
    if (is_wide(text[i])) {
      u.text.push_back(text[i++]);
    } else {
      while (i < text.size() && text[i] != U' ' && text[i] != U'\t' && text[i] != U'\n' &&
             !is_wide(text[i]))
        u.text.push_back(text[i++]);
    }
    units.push_back(std::move(u));
    pending_space = false;
  }

  TextLayout layout;
  layout.font_size = size;
  std::u32string line;
  int line_w = 0;
  const int space_w = metrics.advance(U' ', size);
  for (const auto& u : units) {
    const int w = metrics.measure(std::u32string_view(u.text), size).width;
    const int join = (line.empty() || !u.space_before) ? 0 : space_w;
    if (!line.empty() && max_width > 0 && line_w + join + w > max_width) {
      layout.lines.push_back(std::move(line));
      line.clear();
      line_w = 0;
    }
    if (!line.empty() && u.space_before) {
      line.push_back(U' ');
      line_w += space_w;
    }
    line += u.text;
    line_w += w;
  }
  if (!line.empty() || layout.lines.empty()) layout.lines.push_back(std::move(line));
  for (const auto& l : layout.lines)
    layout.extent.width = std::max(layout.extent.width, metrics.measure(std::u32string_view(l), size).width);
  layout.extent.height = static_cast<int>(layout.lines.size()) * metrics.line_height(size);
  return layout;
}

/// Fixed-cell glyph atlas: a grayscale PNG of cells in row-major order and an
/// index file ("<cell_w> <cell_h> <columns>" then one hex code point per line).
class GlyphAtlas {
 public:
  static GlyphAtlas load(const std::filesystem::path& png, const std::filesystem::path& index) {
    GlyphAtlas a;
    a.image_ = png_decode_gray(read_file(png));
    auto lines = read_lines(index);
    if (lines.empty()) throw FormatError("empty glyph index " + index.string());
    std::istringstream head(lines.front());
    head >> a.cell_w_ >> a.cell_h_ >> a.columns_;
    if (a.cell_w_ <= 0 || a.cell_h_ <= 0 || a.columns_ <= 0)
      throw FormatError("bad glyph index header in " + index.string());
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (trim(lines[i]).empty()) continue;
      a.cells_[static_cast<char32_t>(std::stoul(lines[i], nullptr, 16))] = static_cast<int>(a.cells_.size());
    }
    return a;
  }

  bool has(char32_t cp) const { return cells_.count(cp) != 0; }

  /// Coverage of glyph cp at fractional cell coordinates (u, v) in [0, 1).
  int sample(char32_t cp, double u, double v) const {
    auto it = cells_.find(cp);
    if (it == cells_.end()) return 0;
    const int col = it->second % columns_;
    const int row = it->second / columns_;
    const double fx = u * cell_w_ - 0.5;
    const double fy = v * cell_h_ - 0.5;
    const int x0 = static_cast<int>(std::floor(fx));
    const int y0 = static_cast<int>(std::floor(fy));
    const double tx = fx - x0;
    const double ty = fy - y0;
    auto px = [&](int x, int y) -> double {
      if (x < 0 || y < 0 || x >= cell_w_ || y >= cell_h_) return 0.0;
      return image_.at(col * cell_w_ + x, row * cell_h_ + y);
    };
    const double top = px(x0, y0) * (1 - tx) + px(x0 + 1, y0) * tx;
    const double bot = px(x0, y0 + 1) * (1 - tx) + px(x0 + 1, y0 + 1) * tx;
    return static_cast<int>(std::lround(top * (1 - ty) + bot * ty));
  }

 private:
  GrayImage image_;
  int cell_w_ = 0;
  int cell_h_ = 0;
  int columns_ = 0;
  std::unordered_map<char32_t, int> cells_;
};

/// The bundled renderer: a monospaced Latin atlas and a CJK atlas, with cell
/// metrics. Unknown glyphs are drawn as an outlined box.
class BitmapFont final : public CellMetrics {
 public:
  static std::shared_ptr<const BitmapFont> bundled(const std::filesystem::path& data_dir = default_data_dir()) {
    auto font = std::make_shared<BitmapFont>();
    const auto dir = data_dir / "fonts";
    font->latin_ = GlyphAtlas::load(dir / "latin.png", dir / "latin.idx");
    font->cjk_ = GlyphAtlas::load(dir / "cjk.png", dir / "cjk.idx");
    return font;
  }

  /// Coverage mask of the laid-out text; lines are centered horizontally.
  GrayImage rasterize(const TextLayout& layout) const {
    GrayImage mask;
    mask.width = std::max(layout.extent.width, 1);
    mask.height = std::max(layout.extent.height, 1);
    mask.pixels.assign(static_cast<std::size_t>(mask.width) * mask.height, 0);
    const int s = layout.font_size;
    int y = 0;
    for (const auto& line : layout.lines) {
      const int lw = measure(std::u32string_view(line), s).width;
      int x = (mask.width - lw) / 2;
      for (char32_t cp : line) {
        const int gw = advance(cp, s);
        draw_glyph(mask, cp, x, y, gw, line_height(s));
        x += gw;
      }
      y += line_height(s);
    }
    return mask;
  }

 private:
  void draw_glyph(GrayImage& mask, char32_t cp, int x0, int y0, int gw, int gh) const {
    if (cp == U' ') return;
    const GlyphAtlas* atlas = is_wide(cp) ? &cjk_ : &latin_;
    if (!atlas->has(cp)) {
      const int m = std::max(1, gw / 8);
      for (int y = y0 + gh / 4; y < y0 + gh - gh / 8; ++y)
        for (int x = x0 + m; x < x0 + gw - m; ++x) {
          const bool edge = y < y0 + gh / 4 + m || y >= y0 + gh - gh / 8 - m || x < x0 + 2 * m ||
                            x >= x0 + gw - 2 * m;
          if (edge) put(mask, x, y, 255);
        }
      return;
    }
    // Wide glyph cells are square; centre them vertically in the line box.
    const int cell_h = is_wide(cp) ? gw : gh;
    const int oy = y0 + (gh - cell_h) / 2;
    constexpr int kSub = 3;
    for (int y = 0; y < cell_h; ++y)
      for (int x = 0; x < gw; ++x) {
        int acc = 0;
        for (int sy = 0; sy < kSub; ++sy)
          for (int sx = 0; sx < kSub; ++sx)
            acc += atlas->sample(cp, (x + (sx + 0.5) / kSub) / gw, (y + (sy + 0.5) / kSub) / cell_h);
        put(mask, x0 + x, oy + y, acc / (kSub * kSub));
      }
  }

  static void put(GrayImage& m, int x, int y, int v) {
    if (x < 0 || y < 0 || x >= m.width || y >= m.height) return;
    auto& p = m.pixels[static_cast<std::size_t>(y) * m.width + x];
    p = static_cast<std::uint8_t>(std::max<int>(p, std::clamp(v, 0, 255)));
  }

  GlyphAtlas latin_;
  GlyphAtlas cjk_;
};

/// Grows a coverage mask by radius (disc max filter); the result is larger
/// by radius on every side.
inline GrayImage dilate(const GrayImage& mask, int radius) {
  GrayImage out;
  out.width = mask.width + 2 * radius;
  out.height = mask.height + 2 * radius;
  out.pixels.assign(static_cast<std::size_t>(out.width) * out.height, 0);
  std::vector<std::pair<int, int>> disc;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) disc.emplace_back(dx, dy);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      const auto v = mask.at(x, y);
      if (!v) continue;
      for (auto [dx, dy] : disc) {
        auto& p = out.pixels[static_cast<std::size_t>(y + radius + dy) * out.width + (x + radius + dx)];
        p = std::max(p, v);
      }
    }
  return out;
}

/// Draws text with an exterior stroke at top-left origin of the layout box.
inline void draw_text(RgbImage& image, const BitmapFont& font, const TextLayout& layout, int x, int y,
                      Rgb fill, Rgb stroke, int stroke_width) {
  const auto mask = font.rasterize(layout);
  const auto halo = dilate(mask, stroke_width);
  for (int j = 0; j < halo.height; ++j)
    for (int i = 0; i < halo.width; ++i)
      image.blend(x - stroke_width + i, y - stroke_width + j, stroke, halo.at(i, j));
  for (int j = 0; j < mask.height; ++j)
    for (int i = 0; i < mask.width; ++i) image.blend(x + i, y + j, fill, mask.at(i, j));
}

}  // namespace mmtox
