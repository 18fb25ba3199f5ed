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

#ifndef WEBGROUND_GEOMETRY_H_
#define WEBGROUND_GEOMETRY_H_

#include <cstdint>

namespace webground {

// Pixel coordinate in screenshot space.
struct Point {
  int x = 0;
  int y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Axis-aligned box; (x, y) is the top-left corner.
struct BBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  std::int64_t area() const { return std::int64_t{w} * h; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

struct Size {
  int width = 0;
  int height = 0;

  friend bool operator==(const Size&, const Size&) = default;
};

// Floor of the true midpoint. Always inside `b` for w, h > 0.
Point center_point(const BBox& b);

// Closed-interval containment: edges count as inside.
bool contains_inclusive(const BBox& b, Point p);

// Squared Euclidean distance between two points.
std::int64_t squared_distance(Point a, Point b);

}  // namespace webground

#endif  // WEBGROUND_GEOMETRY_H_
