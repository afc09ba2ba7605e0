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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mmtox/core.hpp"
#include "mmtox/font.hpp"
#include "mmtox/geometry.hpp"
#include "mmtox/raster.hpp"

namespace mmtox {

inline constexpr double kDefaultAreaLow = 0.8;
inline constexpr double kDefaultAreaHigh = 1.2;
inline constexpr double kDefaultOverlapThreshold = 0.30;

/// Which template slot the inserted text carries. Inserting B means the
/// image carries A, so the text must come after the salient object in
/// reading order.
enum class Slot { A, B };

inline std::string to_string(Slot s) { return s == Slot::A ? "A" : "B"; }

struct GridCell {
  int row = 0;
  int col = 0;
  BoundingBox rect;

  bool operator==(const GridCell&) const = default;
};

inline std::string cell_name(int row, int col) {
  static constexpr std::array<const char*, 3> rows = {"top", "middle", "bottom"};
  static constexpr std::array<const char*, 3> cols = {"left", "middle", "right"};
  return std::string(rows.at(static_cast<std::size_t>(row))) + "-" + cols.at(static_cast<std::size_t>(col));
}
inline std::string cell_name(const GridCell& c) { return cell_name(c.row, c.col); }

/// Equal-thirds partition; the remainder pixels go to the last row and column.
inline std::vector<GridCell> candidate_cells(int image_width, int image_height) {
  if (image_width < 3 || image_height < 3)
    throw TooSmallError("image " + std::to_string(image_width) + "x" + std::to_string(image_height) +
                        " is smaller than 3x3");
  const int cw = image_width / 3;
  const int ch = image_height / 3;
  std::vector<GridCell> cells;
  cells.reserve(9);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      cells.push_back({r, c,
                       {c * cw, r * ch, c == 2 ? image_width : (c + 1) * cw,
                        r == 2 ? image_height : (r + 1) * ch}});
  return cells;
}

inline double overlap_fraction(const GridCell& cell, const BoundingBox& salient) {
  return static_cast<double>(intersection_area(cell.rect, salient)) /
         static_cast<double>(cell.rect.area());
}

/// Keeps cells whose overlap with the salient object is at most threshold
/// of the cell's area.
inline std::vector<GridCell> filter_overlap(std::span<const GridCell> cells, const BoundingBox& salient,
                                            double threshold = kDefaultOverlapThreshold) {
  std::vector<GridCell> out;
  for (const auto& c : cells)
    if (overlap_fraction(c, salient) <= threshold) out.push_back(c);
  return out;
}

/// (row, col) of the grid cell containing the salient box centre.
inline std::pair<int, int> salient_cell(int image_width, int image_height, const BoundingBox& salient) {
  const int cx = salient.x1 + salient.width() / 2;
  const int cy = salient.y1 + salient.height() / 2;
  for (const auto& c : candidate_cells(image_width, image_height))
    if (c.rect.contains_point(cx, cy)) return {c.row, c.col};
  throw std::invalid_argument("salient centre lies outside the image");
}

/// Reading-order constraint: text for B goes right of and/or below the
/// salient cell, text for A left of and/or above it.
inline bool reading_order_allows(int row, int col, std::pair<int, int> salient, Slot inserted) {
  if (row == salient.first && col == salient.second) return false;
  if (inserted == Slot::B) return row >= salient.first && col >= salient.second;
  return row <= salient.first && col <= salient.second;
}

inline std::vector<GridCell> filter_reading_order(std::span<const GridCell> cells,
                                                  std::pair<int, int> salient, Slot inserted) {
  std::vector<GridCell> out;
  for (const auto& c : cells)
    if (reading_order_allows(c.row, c.col, salient, inserted)) out.push_back(c);
  return out;
}

/// Uniform choice among the survivors; nullopt means the pair is discarded.
inline std::optional<GridCell> select_placement(std::span<const GridCell> survivors, Rng& rng) {
  if (survivors.empty()) return std::nullopt;
  return survivors[rng.uniform_index(survivors.size())];
}

struct TextSize {
  int font_size = 1;
  std::int64_t area = 0;
  std::int64_t window_low = 0;   // floor(low * w * h), informational
  std::int64_t window_high = 0;  // floor(high * w * h), informational
  bool clamped = false;
};

inline bool area_within_high(std::int64_t area, const BoundingBox& salient, double high) {
  return static_cast<double>(area) <= high * static_cast<double>(salient.area());
}
inline bool area_within_low(std::int64_t area, const BoundingBox& salient, double low) {
  return static_cast<double>(area) >= low * static_cast<double>(salient.area());
}

/// Largest integer font size whose single-line text box area stays within
/// high * w * h of the salient object. Clamped when even that size lands
/// below low * w * h, or when size 1 already exceeds the upper bound.
inline TextSize resize_text(const BoundingBox& salient, std::string_view text, const FontMetrics& metrics,
                            double low = kDefaultAreaLow, double high = kDefaultAreaHigh) {
  require(salient.valid(), "resize_text: invalid salient box");
  require(!text.empty(), "resize_text: empty text");
  const auto cps = utf8_decode(text);
  auto area_at = [&](int s) { return metrics.measure(std::u32string_view(cps), s).area(); };

  TextSize out;
  out.window_low = static_cast<std::int64_t>(low * static_cast<double>(salient.area()));
  out.window_high = static_cast<std::int64_t>(high * static_cast<double>(salient.area()));
  if (!area_within_high(area_at(1), salient, high)) {
    out.font_size = 1;
    out.area = area_at(1);
    out.clamped = true;
    return out;
  }
  int lo = 1;  // fits
  int hi = 2;  // probe for a size that does not fit
  while (hi < (1 << 20) && area_within_high(area_at(hi), salient, high)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (area_within_high(area_at(mid), salient, high)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.font_size = lo;
  out.area = area_at(lo);
  out.clamped = !area_within_low(out.area, salient, low);
  return out;
}

struct StrokeSpec {
  Rgb fill = kBlack;
  Rgb stroke = kWhite;
  int width = 1;

  bool operator==(const StrokeSpec&) const = default;
};

/// Light text with a dark border on dark backgrounds and the reverse on
/// light ones (mean luminance < 128 counts as dark).
inline StrokeSpec choose_stroke(double mean_luminance, int font_size) {
  StrokeSpec s;
  if (mean_luminance < 128.0) {
    s.fill = kWhite;
    s.stroke = kBlack;
  } else {
    s.fill = kBlack;
    s.stroke = kWhite;
  }
  s.width = std::max(1, font_size / 12);
  return s;
}

inline StrokeSpec choose_stroke(const RgbImage& background, const BoundingBox& region, int font_size) {
  return choose_stroke(background.mean_luminance(region), font_size);
}

struct Placement {
  GridCell cell;
  int font_size = 1;
  BoundingBox text_box;
  StrokeSpec stroke;
  std::vector<std::string> lines;
  std::int64_t requested_area = 0;  // single-line area at the sized font
  bool area_clamped = false;        // sizing could not reach the area window
  bool cell_clamped = false;        // font shrunk further to fit the cell
};

struct Discard {
  std::string reason;
};

struct LayoutParams {
  double area_low = kDefaultAreaLow;
  double area_high = kDefaultAreaHigh;
  double overlap_threshold = kDefaultOverlapThreshold;
};

/// All cells that survive both filters, in grid order.
inline std::vector<GridCell> surviving_cells(int image_width, int image_height, const BoundingBox& salient,
                                             Slot inserted, double overlap_threshold) {
  const auto cells = candidate_cells(image_width, image_height);
  const auto kept = filter_overlap(cells, salient, overlap_threshold);
  return filter_reading_order(kept, salient_cell(image_width, image_height, salient), inserted);
}

/// Chooses cell, font size, wrapped lines, centred text box and stroke for
/// inserting text into image. The size targets the salient-area window and
/// then shrinks, if needed, until the stroked box fits the chosen cell.
inline std::variant<Placement, Discard> plan_layout(const RgbImage& image, const BoundingBox& salient,
                                                    std::string_view text, Slot inserted,
                                                    const FontMetrics& metrics, Rng& rng,
                                                    const LayoutParams& params = {}) {
  require(salient.within(image.width(), image.height()), "plan_layout: salient box outside image");
  const auto survivors =
      surviving_cells(image.width(), image.height(), salient, inserted, params.overlap_threshold);
  const auto cell = select_placement(survivors, rng);
  if (!cell) return Discard{"no candidate cell passes the overlap and reading-order filters"};

  const auto sized = resize_text(salient, text, metrics, params.area_low, params.area_high);
  const auto cps = utf8_decode(text);
  int size = sized.font_size;
  TextLayout layout;
  for (;; --size) {
    const int pad = std::max(1, size / 12);
    layout = layout_text(cps, size, cell->rect.width() - 2 * pad, metrics);
    const bool fits = layout.extent.width + 2 * pad <= cell->rect.width() &&
                      layout.extent.height + 2 * pad <= cell->rect.height();
    // Wrapping can make the box taller than the single-line estimate.
    if ((fits && area_within_high(layout.extent.area(), salient, params.area_high)) || size == 1) break;
  }
  if (layout.extent.width > cell->rect.width() || layout.extent.height > cell->rect.height())
    return Discard{"text does not fit cell " + cell_name(*cell) + " even at size 1"};

  Placement p;
  p.cell = *cell;
  p.font_size = size;
  p.requested_area = sized.area;
  p.area_clamped = sized.clamped;
  p.cell_clamped = size < sized.font_size;
  const int x = cell->rect.x1 + (cell->rect.width() - layout.extent.width) / 2;
  const int y = cell->rect.y1 + (cell->rect.height() - layout.extent.height) / 2;
  p.text_box = {x, y, x + layout.extent.width, y + layout.extent.height};
  p.stroke = choose_stroke(image, p.text_box, size);
  for (const auto& l : layout.lines) p.lines.push_back(utf8_encode(l));
  return p;
}

}  // namespace mmtox
