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

#include "webground/spatial.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

#include "webground/classifier.h"
#include "webground/text.h"

namespace webground {
namespace {

constexpr std::array<std::string_view, 9> kRegionLabels = {
    "top-left corner", "top",   "top-right corner", "left",  "center",
    "right",           "bottom-left corner", "bottom", "bottom-right corner",
};

constexpr std::array<std::string_view, 8> kRelationNames = {
    "left_of", "right_of", "above", "below", "next_to", "between", "under_title", "labeled_by",
};

constexpr std::array<std::string_view, 16> kLabeledInputTypes = {
    "",     "text",  "search", "email", "password",       "tel",   "url",  "number",
    "date", "month", "week",   "time",  "datetime-local", "radio", "checkbox", "color",
};

bool overlaps(int a0, int a1, int b0, int b1) { return std::max(a0, b0) < std::min(a1, b1); }

struct Ranked {
  std::int64_t dist2;
  const std::string* id;

  bool operator<(const Ranked& o) const {
    return dist2 != o.dist2 ? dist2 < o.dist2 : *id < *o.id;
  }
};

std::vector<std::string> sorted_ids(std::vector<Ranked>& v) {
  std::sort(v.begin(), v.end());
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& r : v) out.push_back(*r.id);
  return out;
}

}  // namespace

std::string_view relation_kind_name(RelationKind k) {
  return kRelationNames[static_cast<std::size_t>(k)];
}

std::string_view region_label(Region r) { return kRegionLabels[static_cast<std::size_t>(r)]; }

Region region_of_point(Point p, Size canvas) {
  const auto third = [](int v, int extent) {
    const std::int64_t cell = std::int64_t{3} * std::clamp(v, 0, extent) / extent;
    return static_cast<int>(std::min<std::int64_t>(cell, 2));
  };
  const int col = third(p.x, canvas.width);
  const int row = third(p.y, canvas.height);
  return static_cast<Region>(row * 3 + col);
}

Region absolute_region(const BBox& b, Size canvas) {
  return region_of_point(center_point(b), canvas);
}

bool DirectionalNeighbors::empty() const {
  return std::all_of(ids.begin(), ids.end(), [](const auto& v) { return v.empty(); });
}

double center_distance(const BBox& a, const BBox& b) {
  return std::sqrt(static_cast<double>(squared_distance(center_point(a), center_point(b))));
}

DirectionalNeighbors directional_neighbors(const ElementRecord& target,
                                           std::span<const ElementRecord> others) {
  const BBox& t = target.bbox;
  const Point tc = center_point(t);
  std::array<std::vector<Ranked>, 4> ranked;
  for (const auto& o : others) {
    if (o.id == target.id) continue;
    const BBox& b = o.bbox;
    const bool v_overlap = overlaps(t.y, t.bottom(), b.y, b.bottom());
    const bool h_overlap = overlaps(t.x, t.right(), b.x, b.right());
    const Ranked r{squared_distance(tc, center_point(b)), &o.id};
    if (v_overlap && b.right() <= t.x) ranked[0].push_back(r);
    if (v_overlap && b.x >= t.right()) ranked[1].push_back(r);
    if (h_overlap && b.bottom() <= t.y) ranked[2].push_back(r);
    if (h_overlap && b.y >= t.bottom()) ranked[3].push_back(r);
  }
  DirectionalNeighbors out;
  for (std::size_t d = 0; d < 4; ++d) out.ids[d] = sorted_ids(ranked[d]);
  return out;
}

std::vector<std::string> candidate_relatives(const ElementRecord& target,
                                             std::span<const ElementRecord> others,
                                             int max_dist) {
  const Point tc = center_point(target.bbox);
  const std::int64_t limit = std::int64_t{max_dist} * max_dist;
  std::vector<Ranked> ranked;
  for (const auto& o : others) {
    if (o.id == target.id) continue;
    const std::int64_t d2 = squared_distance(tc, center_point(o.bbox));
    if (d2 <= limit) ranked.push_back({d2, &o.id});
  }
  return sorted_ids(ranked);
}

std::optional<std::string> nearest_title(const ElementRecord& target,
                                         std::span<const ElementRecord> others) {
  const ElementRecord* best = nullptr;
  for (const auto& o : others) {
    if (o.id == target.id) continue;
    if (o.tag != "h1" && o.tag != "h2" && o.tag != "h3") continue;
    if (o.bbox.y >= target.bbox.y) continue;
    if (best == nullptr || o.bbox.y > best->bbox.y ||
        (o.bbox.y == best->bbox.y && o.id < best->id)) {
      best = &o;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

bool is_labeled_control(const ElementRecord& e) {
  if (e.tag == "select" || e.tag == "textarea") return true;
  if (e.tag != "input") return false;
  return std::find(kLabeledInputTypes.begin(), kLabeledInputTypes.end(), e.input_type) !=
         kLabeledInputTypes.end();
}

std::optional<std::string> attribute_label(const ElementRecord& control) {
  for (Attribute a : {Attribute::kAriaLabel, Attribute::kTitle, Attribute::kAlt}) {
    std::string label = collapse_whitespace(control.attr(a));
    if (!label.empty()) return label;
  }
  return std::nullopt;
}

std::optional<std::string> associate_label(const ElementRecord& control,
                                           std::span<const ElementRecord> others) {
  if (!is_labeled_control(control) || attribute_label(control)) return std::nullopt;
  const BBox& c = control.bbox;
  const Point cc = center_point(c);
  std::optional<Ranked> row_best;
  std::optional<Ranked> col_best;
  for (const auto& o : others) {
    if (o.id == control.id || classify_element(o) != ElementKind::kPureText) continue;
    if (normalize_text(o.attr(Attribute::kInnerText)).empty()) continue;
    const Ranked r{squared_distance(cc, center_point(o.bbox)), &o.id};
    const Point oc = center_point(o.bbox);
    if (oc.y >= c.y && oc.y <= c.bottom()) {
      if (!row_best || r < *row_best) row_best = r;
    } else if (oc.x >= c.x && oc.x <= c.right()) {
      if (!col_best || r < *col_best) col_best = r;
    }
  }
  if (row_best) return *row_best->id;
  if (col_best) return *col_best->id;
  return std::nullopt;
}

}  // namespace webground
