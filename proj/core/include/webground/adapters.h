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

#ifndef WEBGROUND_ADAPTERS_H_
#define WEBGROUND_ADAPTERS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webground/sampler.h"

namespace webground {

enum class SourceName { kGuiAct, kAndroidControl, kWidgetCaption, kUiBert, kAitz, kWebDirect };

std::string_view source_name(SourceName s);
std::optional<SourceName> source_from_name(std::string_view name);

enum class BBoxFormat { kXywh, kXyxy };

// Declarative field map for one raw dataset layout. Every field is a JSON
// pointer into a raw record; empty pointers are unused.
struct SourceProfile {
  SourceName source = SourceName::kUiBert;
  // "jsonl": one record per line. "json": one document whose array at
  // `records` holds the records.
  bool jsonl = true;
  std::string records;
  std::string id;
  std::string screenshot;
  std::string tag;
  std::string bbox;
  BBoxFormat bbox_format = BBoxFormat::kXywh;
  std::string point;  // used when no bbox; becomes a 1x1 box
  // Coordinates in [0, 1], scaled by the image size fields.
  bool normalized = false;
  std::string image_width;
  std::string image_height;
  std::string text;  // the referring expression (instruction, caption, ...)
  std::string action;
  std::string captions;  // array of strings
  std::string thought;
  std::string multi_step;
  std::string visible;
};

// Throws ParseError on bad JSON and ValidationError on an unknown source,
// an unknown bbox format or a missing "source".
SourceProfile parse_profile(std::string_view json_text);
SourceProfile load_profile(const std::filesystem::path& path);

struct SourceSpec {
  SourceName name = SourceName::kUiBert;
  std::filesystem::path path;
  SourceProfile profile;
};

// Record-level accounting. records_in == records_emitted + every drop.
struct AdaptCounts {
  std::size_t records_in = 0;
  std::size_t records_emitted = 0;
  std::size_t samples = 0;
  std::size_t no_coordinates = 0;
  std::size_t multi_step = 0;
  std::size_t not_visible = 0;
  std::size_t unmappable = 0;

  std::size_t dropped() const { return no_coordinates + multi_step + not_visible + unmappable; }
};

// True when an instruction chains several operations ("click X then type").
bool looks_multi_step(std::string_view text);

// Maps one raw record to samples under the source's filtering rules. Drops
// are tallied in `counts`. `index` names records without an id.
std::vector<GroundingSample> adapt_record(const SourceSpec& spec, std::string_view raw,
                                          std::size_t index, std::uint64_t seed,
                                          AdaptCounts& counts);

// Streams every record of `spec.path`. Consecutive samples sharing a
// screenshot are batched into one record. Throws DataError when the profile
// belongs to another source or the path cannot be read.
AdaptCounts adapt_source(const SourceSpec& spec, std::uint64_t seed,
                         const std::function<void(const ScreenshotRecord&)>& sink);

// adapt_source writing sampler JSONL to `out`.
AdaptCounts adapt_to_file(const SourceSpec& spec, std::uint64_t seed,
                          const std::filesystem::path& out);

}  // namespace webground

#endif  // WEBGROUND_ADAPTERS_H_
