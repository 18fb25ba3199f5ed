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

#ifndef WEBGROUND_MARKER_H_
#define WEBGROUND_MARKER_H_

#include <filesystem>

#include "webground/geometry.h"
#include "webground/image.h"

namespace webground {

inline constexpr int kMarkerStroke = 2;
inline constexpr int kMarkerMinBox = 3;
inline constexpr int kArrowMaxLength = 40;
inline constexpr int kArrowMinLength = 8;
inline constexpr int kArrowHeadLength = 8;

// Where the arrow was drawn. The shaft runs diagonally from `tail` to `tip`;
// `tip` is the pixel just outside the midpoint of one box edge.
struct ArrowPlacement {
  Point tail;
  Point tip;
};

// Red outline along the inside of `box` plus a 45-degree red arrow whose tip
// touches the midpoint of the first edge (top, bottom, left, right) with
// enough free space outside it. Throws std::invalid_argument when the box is
// outside the image, smaller than 3x3, or leaves no room for the arrow.
ArrowPlacement draw_marker(Image& img, const BBox& box);

// Reads `screenshot`, draws the marker and writes a new PNG to `out`.
// Returns `out`. The result is byte-identical for identical inputs.
std::filesystem::path render_marker(const std::filesystem::path& screenshot, const BBox& box,
                                    const std::filesystem::path& out);

}  // namespace webground

#endif  // WEBGROUND_MARKER_H_
