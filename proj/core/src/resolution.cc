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

#include "webground/resolution.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <regex>
#include <stdexcept>

#include "webground/errors.h"

namespace webground {
namespace {

using i64 = std::int64_t;

i64 ceil_div(i64 a, i64 b) { return (a + b - 1) / b; }

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0 || width > kMaxImageDimension || height > kMaxImageDimension) {
    throw std::invalid_argument("image dimensions must be in (0, 2^20]");
  }
}

// Largest column count whose width-resized grid fits in kMaxCells; 0 when
// even one column is too tall.
int max_feasible_cols(int width, int height) {
  int best = 0;
  for (int c = 1; c <= kMaxCells; ++c) {
    const i64 rows = ceil_div(i64{height} * c, width);
    if (c * rows <= kMaxCells) best = c;
  }
  return best;
}

}  // namespace

GridPlan plan_grid(int width, int height) {
  check_dims(width, height);
  const i64 w = width;
  const i64 h = height;

  bool found = false;
  i64 best_kept = 0;   // min(c*224, w): width retained, proportional to sqrt(resolution)
  i64 best_waste = 0;  // (cells*224^2 - kept^2*h/w) * w, exact integer
  int best_cells = 0;
  GridPlan best;
  for (int c = 1; c <= kMaxCells; ++c) {
    const i64 target_w = i64{c} * kCellSize;
    const i64 min_rows = ceil_div(h * c, w);  // rows * 224 >= h * target_w / w
    for (i64 r = min_rows; c * r <= kMaxCells; ++r) {
      const i64 kept = std::min(target_w, w);
      const i64 waste = i64{c} * r * kCellSize * kCellSize * w - kept * kept * h;
      const int cells = static_cast<int>(c * r);
      const bool better = !found || kept > best_kept ||
                          (kept == best_kept && waste < best_waste) ||
                          (kept == best_kept && waste == best_waste && cells < best_cells);
      if (!better) continue;
      found = true;
      best_kept = kept;
      best_waste = waste;
      best_cells = cells;
      best.cols = c;
      best.rows = static_cast<int>(r);
    }
  }

  if (!found) {
    // Taller than 36:1. Fit the height into a single 36-cell column.
    best.cols = 1;
    best.rows = kMaxCells;
    best.target_width = kCellSize;
    best.target_height = kMaxCells * kCellSize;
    best.scale = static_cast<double>(best.target_height) / static_cast<double>(h);
    const i64 scaled_w = w * best.target_height / h;
    best.pad_right = static_cast<int>(kCellSize - scaled_w);
    best.pad_bottom = 0;
    return best;
  }

  best.target_width = best.cols * kCellSize;
  best.target_height = best.rows * kCellSize;
  best.scale = static_cast<double>(best.target_width) / static_cast<double>(w);
  const i64 scaled_h = h * best.target_width / w;
  best.pad_bottom = static_cast<int>(best.target_height - scaled_h);
  best.pad_right = 0;
  return best;
}

ResizeResult resize_for_model(int width, int height) {
  check_dims(width, height);
  const int cols = max_feasible_cols(width, height);
  if (cols == 0) {
    const i64 limit = i64{kMaxCells} * kCellSize;
    if (height <= limit) return {width, height, 1.0};
    const double scale = static_cast<double>(limit) / height;
    return {static_cast<int>(std::max<i64>(1, i64{width} * limit / height)),
            static_cast<int>(limit), scale};
  }
  const i64 max_width = i64{cols} * kCellSize;
  if (width <= max_width) return {width, height, 1.0};
  const double scale = static_cast<double>(max_width) / width;
  return {static_cast<int>(max_width),
          static_cast<int>(std::max<i64>(1, i64{height} * max_width / width)), scale};
}

Point map_point(Point p, double scale, MapDirection direction) {
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  const double f = direction == MapDirection::kToModel ? scale : 1.0 / scale;
  return {static_cast<int>(std::floor(p.x * f)), static_cast<int>(std::floor(p.y * f))};
}

std::string format_coordinates(Point p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

Point parse_coordinates(std::string_view s) {
  static const std::regex kPair(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(s.begin(), s.end(), m, kPair)) {
    throw ParseError("no (x, y) coordinate pair found", s.size());
  }
  try {
    return {std::stoi(m[1].str()), std::stoi(m[2].str())};
  } catch (const std::out_of_range&) {
    throw ParseError("coordinate out of range", static_cast<std::size_t>(m.position(0)));
  }
}

}  // namespace webground
