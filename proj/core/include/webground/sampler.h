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

#ifndef WEBGROUND_SAMPLER_H_
#define WEBGROUND_SAMPLER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "webground/geometry.h"
#include "webground/random.h"
#include "webground/referring_expression.h"
#include "webground/snapshot.h"

namespace webground {

inline constexpr std::size_t kPageElementCap = 100;
inline constexpr std::size_t kLabelFrequencyCap = 1000;
inline constexpr std::size_t kPureTextMultiplier = 3;
inline constexpr std::size_t kPureTextFloor = 10;

struct GroundingSample {
  std::string snapshot_id;
  std::string screenshot_ref;
  std::string element_id;
  std::string tag;
  ReferringExpression re;
  Point target;
  BBox bbox;
};

// target = center_point(bbox).
GroundingSample make_sample(std::string_view snapshot_id, std::string_view screenshot_ref,
                            const ElementRecord& element, ReferringExpression re);

// "In the screenshot, what are the pixel element coordinates corresponding
// to {description}?"
std::string grounding_question(std::string_view description);
// "(x, y)"
std::string grounding_answer(Point target);

// All samples of one screenshot, emitted together as one JSONL line.
struct ScreenshotRecord {
  std::string snapshot_id;
  std::string screenshot_ref;
  std::vector<GroundingSample> samples;
};

std::string serialize_record(const ScreenshotRecord& r);
// Throws ParseError / ValidationError.
ScreenshotRecord parse_record(std::string_view line);

struct SelectedElement {
  const ElementRecord* element = nullptr;
  ReferringExpression re;
};

// One record holding every selected element, or nothing when none survive.
std::optional<ScreenshotRecord> emit_samples(const PageSnapshot& snapshot,
                                             std::span<const SelectedElement> selected);

enum class PriorityTier {
  kLabeled,      // accessibility label or MLLM annotation
  kInteractive,  // other interactive targets
  kPureText,
};

struct SelectionCandidate {
  std::string element_id;
  PriorityTier tier = PriorityTier::kPureText;
};

// min(available, max(3 * labeled, min(10, available)))
std::size_t pure_text_cap(std::size_t labeled, std::size_t available_pure_text);

// Keeps labeled candidates first (ascending id), then other interactive ones
// (ascending id), then a random subset of pure-text candidates limited by
// pure_text_cap, truncating the whole list to `page_cap`.
std::vector<std::string> select_page_elements(std::span<const SelectionCandidate> candidates,
                                              Rng& rng, std::size_t page_cap = kPageElementCap);

// Case-folded descriptor text; the identity used for frequency capping.
std::string label_key(const GroundingSample& s);
// Seeded, content-derived rank; lower ranks survive downsampling.
std::uint64_t sample_rank(const GroundingSample& s, std::uint64_t seed);

// Caps each label at `cap` occurrences, keeping the lowest-ranked samples.
// Three passes over the same sample stream: count(), rank(), keep().
class LabelDownsampler {
 public:
  LabelDownsampler(std::size_t cap, std::uint64_t seed) : cap_(cap), seed_(seed) {}

  void count(const GroundingSample& s);
  void rank(const GroundingSample& s);
  bool keep(const GroundingSample& s);

  const std::unordered_map<std::string, std::size_t>& frequencies() const { return freq_; }
  std::size_t capped_labels() const;

 private:
  struct Key {
    std::uint64_t rank;
    std::string id;
    auto operator<=>(const Key&) const = default;
  };
  struct Threshold {
    Key pivot;
    std::size_t allowed_equal = 0;
    std::size_t kept_equal = 0;
  };
  Key key_of(const GroundingSample& s) const;
  void finalize();

  std::size_t cap_;
  std::uint64_t seed_;
  std::unordered_map<std::string, std::size_t> freq_;
  std::unordered_map<std::string, std::vector<Key>> ranks_;
  std::unordered_map<std::string, Threshold> thresholds_;
  bool finalized_ = false;
};

std::vector<ScreenshotRecord> downsample_labels(std::vector<ScreenshotRecord> records,
                                                std::size_t cap, std::uint64_t seed);

struct DownsampleReport {
  std::size_t records_in = 0;
  std::size_t records_out = 0;
  std::size_t samples_in = 0;
  std::size_t samples_out = 0;
  std::size_t capped_labels = 0;
};

// Streams `in` three times and writes surviving records to `out`. Records
// left without samples are dropped.
DownsampleReport downsample_file(const std::filesystem::path& in,
                                 const std::filesystem::path& out, std::size_t cap,
                                 std::uint64_t seed);

// Percent shares; relative counts relative-positional or contextual REs.
struct StatsReport {
  std::size_t total = 0;
  std::map<std::string, double> tag_shares;
  std::map<std::string, double> descriptor_shares;
  double relative = 0.0;
  double contextual = 0.0;
  double absolute = 0.0;
};

class StatsAccumulator {
 public:
  void add(const GroundingSample& s);
  void add(const ScreenshotRecord& r);
  StatsReport report() const;

 private:
  std::size_t total_ = 0;
  std::map<std::string, std::size_t> tags_;
  std::map<std::string, std::size_t> sources_;
  std::size_t relative_ = 0;
  std::size_t contextual_ = 0;
  std::size_t absolute_ = 0;
};

StatsReport corpus_stats(std::span<const GroundingSample> samples);
std::string serialize_stats(const StatsReport& r);

// Calls `fn` with each parsed record of a JSONL file. Throws DataError when
// the file cannot be opened, ParseError/ValidationError on bad lines.
template <typename Fn>
void for_each_record(const std::filesystem::path& path, Fn&& fn);

}  // namespace webground

#include "webground/sampler_inl.h"

#endif  // WEBGROUND_SAMPLER_H_
