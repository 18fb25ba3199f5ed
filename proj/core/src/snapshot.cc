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

#include "webground/snapshot.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "webground/errors.h"

namespace webground {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 7> kAttributeKeys = {
    "inner_text", "alt", "title", "aria-label", "aria-describedby", "placeholder", "value",
};

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path + "." + key, "missing required field");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) throw ValidationError(path + "." + key, "expected string");
  return v.get<std::string>();
}

int require_int(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number_integer()) throw ValidationError(path + "." + key, "expected integer");
  const auto n = v.get<std::int64_t>();
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) {
    throw ValidationError(path + "." + key, "integer out of range");
  }
  return static_cast<int>(n);
}

Size parse_size(const json& obj, const char* key, const std::string& path) {
  const json& v = require(obj, key, path);
  const std::string p = path + "." + key;
  if (!v.is_object()) throw ValidationError(p, "expected object");
  Size s{require_int(v, "width", p), require_int(v, "height", p)};
  if (s.width <= 0) throw ValidationError(p + ".width", "non-positive width");
  if (s.height <= 0) throw ValidationError(p + ".height", "non-positive height");
  return s;
}

BBox parse_bbox(const json& obj, const std::string& path) {
  const json& v = require(obj, "bbox", path);
  const std::string p = path + ".bbox";
  if (!v.is_object()) throw ValidationError(p, "expected object");
  BBox b{require_int(v, "x", p), require_int(v, "y", p), require_int(v, "w", p),
         require_int(v, "h", p)};
  if (b.w <= 0) throw ValidationError(p, "non-positive width");
  if (b.h <= 0) throw ValidationError(p, "non-positive height");
  if (b.x < 0 || b.y < 0) throw ValidationError(p, "negative coordinate");
  return b;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

ElementRecord parse_element(const json& v, const std::string& path) {
  if (!v.is_object()) throw ValidationError(path, "expected object");
  ElementRecord e;
  e.id = require_string(v, "id", path);
  if (e.id.empty()) throw ValidationError(path + ".id", "empty id");
  e.tag = lowercase(require_string(v, "tag", path));
  if (e.tag.empty()) throw ValidationError(path + ".tag", "empty tag");
  if (auto it = v.find("attributes"); it != v.end() && !it->is_null()) {
    if (!it->is_object()) throw ValidationError(path + ".attributes", "expected object");
    for (const auto& [key, value] : it->items()) {
      const auto attr = attribute_from_key(key);
      if (!attr) continue;
      if (value.is_null()) continue;
      if (!value.is_string()) {
        throw ValidationError(path + ".attributes." + key, "expected string");
      }
      e.attributes.emplace(*attr, value.get<std::string>());
    }
  }
  e.bbox = parse_bbox(v, path);
  if (auto it = v.find("ocr_text"); it != v.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError(path + ".ocr_text", "expected string");
    e.ocr_text = it->get<std::string>();
  }
  const json& vis = require(v, "visible", path);
  if (!vis.is_boolean()) throw ValidationError(path + ".visible", "expected boolean");
  e.visible = vis.get<bool>();
  if (auto it = v.find("input_type"); it != v.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError(path + ".input_type", "expected string");
    e.input_type = lowercase(it->get<std::string>());
  }
  return e;
}

}  // namespace

std::string_view attribute_key(Attribute a) { return kAttributeKeys[static_cast<std::size_t>(a)]; }

std::optional<Attribute> attribute_from_key(std::string_view key) {
  for (std::size_t i = 0; i < kAttributeKeys.size(); ++i) {
    if (kAttributeKeys[i] == key) return static_cast<Attribute>(i);
  }
  return std::nullopt;
}

std::string_view ElementRecord::attr(Attribute a) const {
  auto it = attributes.find(a);
  return it == attributes.end() ? std::string_view{} : std::string_view{it->second};
}

PageSnapshot parse_snapshot(std::string_view raw) {
  json doc;
  try {
    doc = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed snapshot JSON: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ValidationError("$", "expected top-level object");
  const std::string root = "$";
  PageSnapshot s;
  s.snapshot_id = require_string(doc, "snapshot_id", root);
  s.url = require_string(doc, "url", root);
  s.viewport = parse_size(doc, "viewport", root);
  s.canvas = parse_size(doc, "canvas", root);
  s.screenshot_ref = require_string(doc, "screenshot_ref", root);
  const json& elements = require(doc, "elements", root);
  if (!elements.is_array()) throw ValidationError("$.elements", "expected array");
  s.elements.reserve(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    s.elements.push_back(parse_element(elements[i], "$.elements[" + std::to_string(i) + "]"));
  }
  return s;
}

PageSnapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open snapshot " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_snapshot(buf.str());
}

std::string serialize_snapshot(const PageSnapshot& s) {
  json doc;
  doc["snapshot_id"] = s.snapshot_id;
  doc["url"] = s.url;
  doc["viewport"] = {{"width", s.viewport.width}, {"height", s.viewport.height}};
  doc["canvas"] = {{"width", s.canvas.width}, {"height", s.canvas.height}};
  doc["screenshot_ref"] = s.screenshot_ref;
  json elements = json::array();
  for (const auto& e : s.elements) {
    json attrs = json::object();
    for (const auto& [a, value] : e.attributes) attrs[std::string(attribute_key(a))] = value;
    json el = {
        {"id", e.id},
        {"tag", e.tag},
        {"attributes", std::move(attrs)},
        {"bbox", {{"x", e.bbox.x}, {"y", e.bbox.y}, {"w", e.bbox.w}, {"h", e.bbox.h}}},
        {"visible", e.visible},
    };
    if (e.ocr_text) el["ocr_text"] = *e.ocr_text;
    if (!e.input_type.empty()) el["input_type"] = e.input_type;
    elements.push_back(std::move(el));
  }
  doc["elements"] = std::move(elements);
  return doc.dump();
}

std::vector<Violation> validate_snapshot(const PageSnapshot& s) {
  std::vector<Violation> out;
  if (s.viewport.width <= 0 || s.viewport.height <= 0) out.push_back({"", "non-positive viewport"});
  if (s.canvas.width <= 0 || s.canvas.height <= 0) out.push_back({"", "non-positive canvas"});
  if (s.viewport.width != s.canvas.width) out.push_back({"", "viewport width differs from canvas"});
  if (s.canvas.height < s.viewport.height) out.push_back({"", "canvas shorter than viewport"});

  std::set<std::string_view> seen;
  std::set<std::string_view> reported;
  for (const auto& e : s.elements) {
    if (e.id.empty()) out.push_back({e.id, "empty id"});
    if (!seen.insert(e.id).second && reported.insert(e.id).second) {
      out.push_back({e.id, "duplicate id"});
    }
    if (e.tag.empty()) {
      out.push_back({e.id, "empty tag"});
    } else if (std::any_of(e.tag.begin(), e.tag.end(),
                           [](unsigned char c) { return std::isupper(c); })) {
      out.push_back({e.id, "tag not lowercase"});
    }
    bool box_ok = true;
    if (e.bbox.w <= 0) {
      out.push_back({e.id, "non-positive width"});
      box_ok = false;
    }
    if (e.bbox.h <= 0) {
      out.push_back({e.id, "non-positive height"});
      box_ok = false;
    }
    if (e.bbox.x < 0 || e.bbox.y < 0) {
      out.push_back({e.id, "negative coordinate"});
      box_ok = false;
    }
    if (box_ok && (std::int64_t{e.bbox.x} + e.bbox.w > s.canvas.width ||
                   std::int64_t{e.bbox.y} + e.bbox.h > s.canvas.height)) {
      out.push_back({e.id, "bbox out of canvas"});
    }
  }
  return out;
}

}  // namespace webground
