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

#include "webground/marker.h"

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>

namespace webground {
namespace {

struct Candidate {
  Point tip;
  int dx;  // shaft direction from tail to tip, each +-1
  int dy;
};

// Longest diagonal shaft ending at `c.tip` that stays inside the image.
int shaft_room(const Image& img, const Candidate& c) {
  // tail = tip - L * (dx, dy)
  const int room_x = c.dx > 0 ? c.tip.x : img.width() - 1 - c.tip.x;
  const int room_y = c.dy > 0 ? c.tip.y : img.height() - 1 - c.tip.y;
  return std::min({room_x, room_y, kArrowMaxLength});
}

bool outside_box(const BBox& b, int x, int y) {
  return x < b.x || x >= b.right() || y < b.y || y >= b.bottom();
}

}  // namespace

ArrowPlacement draw_marker(Image& img, const BBox& box) {
  if (box.x < 0 || box.y < 0 || box.w <= 0 || box.h <= 0 || box.right() > img.width() ||
      box.bottom() > img.height()) {
    throw std::invalid_argument("bbox outside image");
  }
  if (box.w < kMarkerMinBox || box.h < kMarkerMinBox) {
    throw std::invalid_argument("bbox too small to annotate");
  }

  const int mx = box.x + box.w / 2;
  const int my = box.y + box.h / 2;
  // Each edge is approached from both diagonal sides; first fit wins.
  const std::array<Candidate, 8> candidates = {{
      {{mx, box.y - 1}, +1, +1},
      {{mx, box.y - 1}, -1, +1},
      {{mx, box.bottom()}, +1, -1},
      {{mx, box.bottom()}, -1, -1},
      {{box.x - 1, my}, +1, +1},
      {{box.x - 1, my}, +1, -1},
      {{box.right(), my}, -1, +1},
      {{box.right(), my}, -1, -1},
  }};
  std::optional<Candidate> chosen;
  int length = 0;
  for (const auto& c : candidates) {
    if (!img.in_bounds(c.tip.x, c.tip.y)) continue;
    const int room = shaft_room(img, c);
    if (room >= kArrowMinLength) {
      chosen = c;
      length = room;
      break;
    }
  }
  if (!chosen) throw std::invalid_argument("no room for arrow outside bbox");

  for (int y = box.y; y < box.bottom(); ++y) {
    for (int x = box.x; x < box.right(); ++x) {
      const bool edge = x < box.x + kMarkerStroke || x >= box.right() - kMarkerStroke ||
                        y < box.y + kMarkerStroke || y >= box.bottom() - kMarkerStroke;
      if (edge) img.set(x, y, kMarkerRed);
    }
  }

  const Candidate& c = *chosen;
  const Point tail{c.tip.x - length * c.dx, c.tip.y - length * c.dy};
  // Thicken toward the tail side so the shaft never crosses into the box.
  const int tx = c.dx > 0 ? -1 : 0;
  const int ty = c.dy > 0 ? -1 : 0;
  for (int i = 0; i <= length; ++i) {
    const int x = tail.x + i * c.dx;
    const int y = tail.y + i * c.dy;
    for (int oy = 0; oy < kMarkerStroke; ++oy) {
      for (int ox = 0; ox < kMarkerStroke; ++ox) {
        const int px = x + ox + tx;
        const int py = y + oy + ty;
        if (outside_box(box, px, py)) img.set_clipped(px, py, kMarkerRed);
      }
    }
  }
  // Head: two axis-aligned strokes back from the tip, 45 degrees off the shaft.
  const int head = std::min(kArrowHeadLength, length);
  for (int i = 0; i <= head; ++i) {
    const int hx = c.tip.x - i * c.dx;
    const int hy = c.tip.y - i * c.dy;
    if (outside_box(box, hx, c.tip.y)) img.set_clipped(hx, c.tip.y, kMarkerRed);
    if (outside_box(box, c.tip.x, hy)) img.set_clipped(c.tip.x, hy, kMarkerRed);
  }
  return {tail, c.tip};
}

std::filesystem::path render_marker(const std::filesystem::path& screenshot, const BBox& box,
                                    const std::filesystem::path& out) {
  Image img = read_png(screenshot);
  draw_marker(img, box);
  write_png(img, out);
  return out;
}

}  // namespace webground
