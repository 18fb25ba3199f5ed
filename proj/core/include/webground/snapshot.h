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

#ifndef WEBGROUND_SNAPSHOT_H_
#define WEBGROUND_SNAPSHOT_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webground/geometry.h"

namespace webground {

// The salient HTML attributes captured per element. Nothing else is kept.
enum class Attribute {
  kInnerText,
  kAlt,
  kTitle,
  kAriaLabel,
  kAriaDescribedby,
  kPlaceholder,
  kValue,
};

inline constexpr std::array<Attribute, 7> kSalientAttributes = {
    Attribute::kInnerText, Attribute::kAlt,         Attribute::kTitle, Attribute::kAriaLabel,
    Attribute::kAriaDescribedby, Attribute::kPlaceholder, Attribute::kValue,
};

// JSON key for an attribute: "inner_text", "alt", "title", "aria-label",
// "aria-describedby", "placeholder", "value".
std::string_view attribute_key(Attribute a);
std::optional<Attribute> attribute_from_key(std::string_view key);

struct ElementRecord {
  std::string id;
  std::string tag;  // lowercase
  std::map<Attribute, std::string> attributes;
  BBox bbox;
  std::optional<std::string> ocr_text;
  bool visible = true;
  // The `type` attribute of <input> elements ("radio", "checkbox", "text",
  // ...). Empty for other tags or when unknown.
  std::string input_type;

  // Attribute value, or an empty view when absent.
  std::string_view attr(Attribute a) const;
  bool has_attr(Attribute a) const { return !attr(a).empty(); }
};

struct PageSnapshot {
  std::string snapshot_id;
  std::string url;
  Size viewport;
  Size canvas;
  std::string screenshot_ref;
  std::vector<ElementRecord> elements;
};

// Parses snapshot JSON. Throws ParseError (with byte offset) on malformed
// JSON and ValidationError (naming the field) on schema violations or
// per-field invariant breaks such as a non-positive width. Unknown fields
// and unknown attribute keys are ignored. Tags are lowercased.
PageSnapshot parse_snapshot(std::string_view raw);

// Reads and parses a snapshot file. I/O failures throw DataError.
PageSnapshot load_snapshot(const std::filesystem::path& path);

// Canonical JSON form; parse_snapshot(serialize_snapshot(s)) reproduces s.
std::string serialize_snapshot(const PageSnapshot& s);

struct Violation {
  std::string element_id;  // empty for snapshot-level rules
  std::string rule;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Every broken invariant, in element order. Empty iff the snapshot is valid.
std::vector<Violation> validate_snapshot(const PageSnapshot& s);

}  // namespace webground

#endif  // WEBGROUND_SNAPSHOT_H_
