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

#include <string>

#include "mmtox/core.hpp"
#include "mmtox/font.hpp"
#include "mmtox/layout.hpp"
#include "mmtox/modality.hpp"
#include "mmtox/raster.hpp"

namespace mmtox {

/// Rebuilds the text layout a Placement describes.
inline TextLayout placement_layout(const Placement& p) {
  TextLayout layout;
  layout.font_size = p.font_size;
  for (const auto& l : p.lines) layout.lines.push_back(utf8_decode(l));
  layout.extent = {p.text_box.width(), p.text_box.height()};
  return layout;
}

/// Draws the placed text, with its stroke, onto a copy of base.
inline RgbImage compose_image(const RgbImage& base, const Placement& placement, const BitmapFont& font) {
  if (!placement.text_box.valid() || !placement.cell.rect.contains(placement.text_box))
    throw RenderError("text box " + to_string(placement.text_box) + " is not inside cell " +
                      to_string(placement.cell.rect));
  if (!placement.cell.rect.within(base.width(), base.height()))
    throw RenderError("placement cell lies outside the image");
  RgbImage out = base;
  draw_text(out, font, placement_layout(placement), placement.text_box.x1, placement.text_box.y1,
            placement.stroke.fill, placement.stroke.stroke, placement.stroke.width);
  return out;
}

inline RgbImage compose_image(const ImageAsset& asset, const Placement& placement, const BitmapFont& font) {
  RgbImage base;
  try {
    base = load_png(asset.path);
  } catch (const Error& e) {
    throw RenderError("cannot load " + asset.path.string() + ": " + e.what());
  }
  return compose_image(base, placement, font);
}

}  // namespace mmtox
