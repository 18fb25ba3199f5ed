// Copyright 2026 The Webground Authors
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

#ifndef WEBGROUND_RESOLUTION_H_
#define WEBGROUND_RESOLUTION_H_

#include <string>
#include <string_view>

#include "webground/geometry.h"

namespace webground {

inline constexpr int kCellSize = 224;
inline constexpr int kMaxCells = 36;
inline constexpr int kMaxImageDimension = 1 << 20;

// Slice layout for one screenshot. The image is resized so its width equals
// cols * 224 (aspect preserved) and padded at the bottom to rows * 224.
// Pages taller than 36:1 cannot fit by width alone; for those the height is
// fit to 36 cells and the leftover width is padded on the right.
struct GridPlan {
  int cols = 0;
  int rows = 0;
  int cell = kCellSize;
  int target_width = 0;
  int target_height = 0;
  double scale = 1.0;  // original -> target
  int pad_bottom = 0;
  int pad_right = 0;

  int cells() const { return cols * rows; }
};

// Chooses the grid that keeps the most of the original resolution (no credit
// for upscaling), then wastes the least canvas, then uses fewer cells.
// Throws std::invalid_argument unless 0 < w, h <= kMaxImageDimension.
GridPlan plan_grid(int width, int height);

struct ResizeResult {
  int width = 0;
  int height = 0;
  double scale = 1.0;
};

// Downscales by width only when no grid of <= 36 cells can hold the image at
// its native width; never upscales.
ResizeResult resize_for_model(int width, int height);

enum class MapDirection { kToModel, kToOriginal };

// Scales coordinates with floor rounding. Bottom/right padding never shifts
// a point.
Point map_point(Point p, double scale, MapDirection direction);

// "(x, y)"
std::string format_coordinates(Point p);

// First parenthesized non-negative integer pair in `s`, surrounding prose
// allowed. Throws ParseError when none is found.
Point parse_coordinates(std::string_view s);

}  // namespace webground

#endif  // WEBGROUND_RESOLUTION_H_
