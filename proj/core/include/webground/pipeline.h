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

#ifndef WEBGROUND_PIPELINE_H_
#define WEBGROUND_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "webground/augmentation.h"
#include "webground/classifier.h"
#include "webground/referring_expression.h"
#include "webground/sampler.h"
#include "webground/snapshot.h"
#include "webground/spatial.h"

namespace webground {

struct Caps {
  std::size_t page_elems = kPageElementCap;
  std::size_t label_cap = kLabelFrequencyCap;
  int rel_dist = kRelativeMaxDistance;
  double sim_threshold = kTextualSimilarityThreshold;
};

struct SynthesisOptions {
  Caps caps;
  SynthesisPolicy policy;  // policy.seed drives every random choice
  // Element crops for the description service are written here.
  std::filesystem::path work_dir;
  // Anchors with longer names are not used in relative clauses.
  std::size_t max_anchor_chars = 60;
  int jobs = 1;
};

struct DropCounts {
  std::size_t invisible = 0;
  std::size_t invalid_element = 0;
  std::size_t ambiguous = 0;
  std::size_t no_descriptor = 0;
  std::size_t not_selected = 0;
  std::size_t augmentation_skipped = 0;  // element kept without an MLLM description
  std::size_t label_downsampled = 0;

  DropCounts& operator+=(const DropCounts& o);
};

struct SnapshotResult {
  std::optional<ScreenshotRecord> record;
  std::size_t candidates = 0;
  std::size_t mllm_annotated = 0;
  DropCounts drops;
};

// Name used when an element serves as the anchor of a relative clause:
// its inner text, else its attribute label. Nothing when empty or longer
// than `max_chars`.
std::optional<std::string> anchor_name(const ElementRecord& e, std::size_t max_chars);

// Every relation the target could be described by: directional neighbors
// within `max_dist` and the enclosing section title. Anchors listed in
// `excluded` or without a usable name are skipped.
std::vector<RelationCandidate> relation_pool(const ElementRecord& target,
                                             std::span<const ElementRecord> elements,
                                             int max_dist, std::size_t max_anchor_chars,
                                             const std::set<std::string>& excluded = {});

// Runs the whole per-page pipeline: validation, classification, ambiguity
// filtering, optional MLLM descriptions, RE assembly and page selection.
// Snapshot-level violations and broken ids throw DataError; other invalid
// elements are dropped. `client` may be null. Relative screenshot
// references resolve against `base_dir`.
SnapshotResult synthesize_snapshot(const PageSnapshot& snapshot, const SynthesisOptions& options,
                                   AugmentationClient* client,
                                   const std::filesystem::path& base_dir = {});

// *.json files under `dir` (non-recursive) in name order, or `dir` itself
// when it is a file.
std::vector<std::filesystem::path> list_snapshot_files(const std::filesystem::path& dir);

struct CorpusReport {
  std::size_t snapshots = 0;
  std::size_t records = 0;
  std::size_t samples = 0;
  std::size_t candidates = 0;
  std::size_t mllm_annotated = 0;
  DropCounts drops;
  DownsampleReport downsample;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Synthesizes every snapshot on `jobs` workers, writes records in file
// order, then caps label frequencies. The output bytes do not depend on
// `jobs`. A scratch file `<out>.part` is removed on success.
CorpusReport synthesize_corpus(const std::vector<std::filesystem::path>& files,
                               const std::filesystem::path& out, const SynthesisOptions& options,
                               AugmentationClient* client, const ProgressFn& progress = {});

// Web-Direct: marks `element` on the screenshot, asks the description
// service about it and returns a sample unless the element is reported
// invisible or the call is skipped.
std::optional<GroundingSample> describe_direct(const PageSnapshot& snapshot,
                                               const ElementRecord& element,
                                               AugmentationClient& client,
                                               const std::filesystem::path& work_dir,
                                               DirectStyle style,
                                               const std::filesystem::path& base_dir = {});

}  // namespace webground

#endif  // WEBGROUND_PIPELINE_H_
