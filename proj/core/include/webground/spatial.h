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

#ifndef WEBGROUND_SPATIAL_H_
#define WEBGROUND_SPATIAL_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "webground/geometry.h"
#include "webground/snapshot.h"

namespace webground {

inline constexpr int kRelativeMaxDistance = 500;

enum class RelationKind {
  kLeftOf,
  kRightOf,
  kAbove,
  kBelow,
  kNextTo,
  kBetween,
  kUnderTitle,
  kLabeledBy,
};

std::string_view relation_kind_name(RelationKind k);

// `subject` stands in relation `kind` to `object`. Only kBetween uses
// `second_object_id`.
struct Relation {
  std::string subject_id;
  std::string object_id;
  std::optional<std::string> second_object_id;
  RelationKind kind = RelationKind::kNextTo;
  double distance = 0.0;  // center to center, pixels
};

// Cells of the equal-thirds 3x3 grid over the canvas.
enum class Region {
  kTopLeft,
  kTop,
  kTopRight,
  kLeft,
  kCenter,
  kRight,
  kBottomLeft,
  kBottom,
  kBottomRight,
};

// "top-left corner", "top", ..., "center", ...
std::string_view region_label(Region r);

Region region_of_point(Point p, Size canvas);
Region absolute_region(const BBox& b, Size canvas);

enum class Direction { kLeft, kRight, kAbove, kBelow };
inline constexpr std::array<Direction, 4> kDirections = {
    Direction::kLeft, Direction::kRight, Direction::kAbove, Direction::kBelow};

struct DirectionalNeighbors {
  std::array<std::vector<std::string>, 4> ids;

  const std::vector<std::string>& operator[](Direction d) const {
    return ids[static_cast<std::size_t>(d)];
  }
  std::vector<std::string>& operator[](Direction d) { return ids[static_cast<std::size_t>(d)]; }
  bool empty() const;
};

double center_distance(const BBox& a, const BBox& b);

// An element neighbors the target in direction d when it lies entirely on
// side d and its projection on the perpendicular axis overlaps the target's.
// Lists are sorted by center distance, then id. Elements sharing the
// target's id are skipped.
DirectionalNeighbors directional_neighbors(const ElementRecord& target,
                                           std::span<const ElementRecord> others);

// Ids within `max_dist` (inclusive, center to center), nearest first.
std::vector<std::string> candidate_relatives(const ElementRecord& target,
                                             std::span<const ElementRecord> others,
                                             int max_dist = kRelativeMaxDistance);

// Nearest h1/h2/h3 whose top edge is strictly above the target's top edge.
std::optional<std::string> nearest_title(const ElementRecord& target,
                                         std::span<const ElementRecord> others);

// Radios, checkboxes, text-like inputs, selects and textareas.
bool is_labeled_control(const ElementRecord& e);

// Label text carried by the control itself (aria-label, title, alt), if any.
std::optional<std::string> attribute_label(const ElementRecord& control);

// Pure-text element labelling a control: nearest one whose vertical center
// falls inside the control's vertical span, else nearest whose horizontal
// center falls inside its horizontal span. Returns nothing when the control
// already carries an attribute label or is not a labeled control.
std::optional<std::string> associate_label(const ElementRecord& control,
                                           std::span<const ElementRecord> others);

}  // namespace webground

#endif  // WEBGROUND_SPATIAL_H_
