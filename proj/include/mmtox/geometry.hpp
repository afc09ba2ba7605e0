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
#include <cstdint>
#include <string>

namespace mmtox {

/// Axis-aligned pixel rectangle [x1, x2) x [y1, y2).
struct BoundingBox {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  int width() const { return x2 - x1; }
  int height() const { return y2 - y1; }
  std::int64_t area() const {
    return valid() ? static_cast<std::int64_t>(width()) * height() : 0;
  }
  bool valid() const { return 0 <= x1 && x1 < x2 && 0 <= y1 && y1 < y2; }

  bool contains(const BoundingBox& o) const {
    return x1 <= o.x1 && y1 <= o.y1 && o.x2 <= x2 && o.y2 <= y2;
  }
  bool contains_point(int x, int y) const { return x1 <= x && x < x2 && y1 <= y && y < y2; }
  bool within(int image_width, int image_height) const {
    return valid() && x2 <= image_width && y2 <= image_height;
  }

  bool operator==(const BoundingBox&) const = default;
};

inline std::int64_t intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const int w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const int h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0 || h <= 0) return 0;
  return static_cast<std::int64_t>(w) * h;
}

inline std::string to_string(const BoundingBox& b) {
  return "[" + std::to_string(b.x1) + "," + std::to_string(b.y1) + "," + std::to_string(b.x2) +
         "," + std::to_string(b.y2) + "]";
}

}  // namespace mmtox
