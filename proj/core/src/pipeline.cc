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

#include "webground/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "webground/errors.h"
#include "webground/image.h"
#include "webground/marker.h"
#include "webground/random.h"
#include "webground/text.h"

namespace webground {
namespace {

RelationKind relation_for(Direction d) {
  // A neighbor on the left means the target is to its right.
  switch (d) {
    case Direction::kLeft:
      return RelationKind::kRightOf;
    case Direction::kRight:
      return RelationKind::kLeftOf;
    case Direction::kAbove:
      return RelationKind::kBelow;
    case Direction::kBelow:
      return RelationKind::kAbove;
  }
  return RelationKind::kNextTo;
}

Direction opposite(Direction d) {
  switch (d) {
    case Direction::kLeft:
      return Direction::kRight;
    case Direction::kRight:
      return Direction::kLeft;
    case Direction::kAbove:
      return Direction::kBelow;
    case Direction::kBelow:
      return Direction::kAbove;
  }
  return d;
}

bool has_accessibility_label(const ElementRecord& e) {
  for (Attribute a : kSalientAttributes) {
    if (a != Attribute::kInnerText && !collapse_whitespace(e.attr(a)).empty()) return true;
  }
  return false;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& ref) {
  std::filesystem::path p(ref);
  if (p.is_relative() && !base.empty()) return base / p;
  return p;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::filesystem::path scratch_dir(const std::filesystem::path& work_dir) {
  return work_dir.empty() ? std::filesystem::temp_directory_path() / "webground-work" : work_dir;
}

// Lazily loaded screenshot shared by one snapshot's crops.
class ScreenshotCache {
 public:
  explicit ScreenshotCache(std::filesystem::path path) : path_(std::move(path)) {}
  const Image* get() {
    if (!tried_) {
      tried_ = true;
      try {
        image_ = read_png(path_);
      } catch (const DataError&) {
        image_.reset();
      }
    }
    return image_ ? &*image_ : nullptr;
  }

 private:
  std::filesystem::path path_;
  bool tried_ = false;
  std::optional<Image> image_;
};

std::optional<std::string> mllm_description(const PageSnapshot& s, const ElementRecord& e,
                                            AugmentationClient& client,
                                            const std::filesystem::path& work_dir,
                                            ScreenshotCache& shot) {
  std::map<std::string, std::string> attrs;
  attrs["tag"] = e.tag;
  for (Attribute a : kSalientAttributes) {
    std::string v = collapse_whitespace(e.attr(a));
    if (!v.empty()) attrs[std::string(attribute_key(a))] = std::move(v);
  }
  std::string crop_ref = s.screenshot_ref;
  if (!client.mock()) {
    const Image* img = shot.get();
    if (img == nullptr) return std::nullopt;
    const BBox b = e.bbox;
    if (b.x < 0 || b.y < 0 || b.right() > img->width() || b.bottom() > img->height()) {
      return std::nullopt;
    }
    const auto dir = scratch_dir(work_dir) / "crops";
    std::filesystem::create_directories(dir);
    const auto path = dir / (hex(hash_keys(0, {s.snapshot_id, e.id})) + ".png");
    write_png(crop(*img, b), path);
    crop_ref = path.string();
  }
  auto long_desc = client.describe_element(e.id, crop_ref, attrs);
  if (!long_desc || long_desc->empty()) return std::nullopt;
  return client.condense_description(*long_desc);
}

}  // namespace

DropCounts& DropCounts::operator+=(const DropCounts& o) {
  invisible += o.invisible;
  invalid_element += o.invalid_element;
  ambiguous += o.ambiguous;
  no_descriptor += o.no_descriptor;
  not_selected += o.not_selected;
  augmentation_skipped += o.augmentation_skipped;
  label_downsampled += o.label_downsampled;
  return *this;
}

std::optional<std::string> anchor_name(const ElementRecord& e, std::size_t max_chars) {
  std::string name = collapse_whitespace(e.attr(Attribute::kInnerText));
  if (name.empty()) {
    auto label = attribute_label(e);
    if (label) name = collapse_whitespace(*label);
  }
  if (name.empty() || name.size() > max_chars) return std::nullopt;
  return name;
}

std::vector<RelationCandidate> relation_pool(const ElementRecord& target,
                                             std::span<const ElementRecord> elements,
                                             int max_dist, std::size_t max_anchor_chars,
                                             const std::set<std::string>& excluded) {
  std::map<std::string_view, const ElementRecord*> by_id;
  for (const auto& e : elements) by_id.emplace(e.id, &e);
  auto usable = [&](const std::string& id) -> std::optional<std::string> {
    if (excluded.contains(id)) return std::nullopt;
    const ElementRecord* e = by_id.at(id);
    if (center_distance(target.bbox, e->bbox) > max_dist) return std::nullopt;
    return anchor_name(*e, max_anchor_chars);
  };

  const DirectionalNeighbors neighbors = directional_neighbors(target, elements);
  std::vector<RelationCandidate> pool;
  for (Direction d : kDirections) {
    std::optional<std::pair<std::string, std::string>> across;
    for (const auto& id : neighbors[opposite(d)]) {
      if (auto name = usable(id)) {
        across.emplace(id, std::move(*name));
        break;
      }
    }
    for (const auto& id : neighbors[d]) {
      auto name = usable(id);
      if (!name) continue;
      RelationCandidate c;
      c.relation.subject_id = target.id;
      c.relation.object_id = id;
      c.relation.kind = relation_for(d);
      c.relation.distance = center_distance(target.bbox, by_id.at(id)->bbox);
      c.object_text = std::move(*name);
      if (across) {
        c.opposite_id = across->first;
        c.opposite_text = across->second;
      }
      pool.push_back(std::move(c));
    }
  }
  if (auto title = nearest_title(target, elements); title && !excluded.contains(*title)) {
    const ElementRecord* t = by_id.at(*title);
    if (auto name = anchor_name(*t, max_anchor_chars)) {
      RelationCandidate c;
      c.relation.subject_id = target.id;
      c.relation.object_id = *title;
      c.relation.kind = RelationKind::kUnderTitle;
      c.relation.distance = center_distance(target.bbox, t->bbox);
      c.object_text = std::move(*name);
      pool.push_back(std::move(c));
    }
  }
  return pool;
}

SnapshotResult synthesize_snapshot(const PageSnapshot& snapshot, const SynthesisOptions& options,
                                   AugmentationClient* client,
                                   const std::filesystem::path& base_dir) {
  SnapshotResult result;
  std::set<std::string> invalid;
  for (const auto& v : validate_snapshot(snapshot)) {
    if (v.element_id.empty() || v.rule == "duplicate id") {
      throw DataError(snapshot.snapshot_id + ": " +
                      (v.element_id.empty() ? "" : "element " + v.element_id + ": ") + v.rule);
    }
    invalid.insert(v.element_id);
  }

  std::vector<ElementRecord> visible;
  visible.reserve(snapshot.elements.size());
  for (const auto& e : snapshot.elements) {
    if (invalid.contains(e.id)) {
      ++result.drops.invalid_element;
    } else if (!e.visible) {
      ++result.drops.invisible;
    } else {
      visible.push_back(e);
    }
  }

  struct Target {
    const ElementRecord* element;
    ElementClass cls;
  };
  std::vector<Target> targets;
  std::vector<ElementRecord> textual;
  for (const auto& e : visible) {
    const ElementClass cls = classify(e, options.caps.sim_threshold);
    const bool has_text = !collapse_whitespace(e.attr(Attribute::kInnerText)).empty();
    // Pure-text elements compete for ambiguity but only serve as anchors.
    if ((cls.kind == ElementKind::kPureText && has_text) || cls.textual) textual.push_back(e);
    if (cls.kind == ElementKind::kInteractive) targets.push_back({&e, cls});
  }
  const std::set<std::string> ambiguous = dedup_ambiguous(textual);

  const SynthesisPolicy& policy = options.policy;
  ScreenshotCache shot(resolve(base_dir, snapshot.screenshot_ref));
  std::vector<SelectionCandidate> candidates;
  std::map<std::string, SelectedElement> built;
  for (const Target& t : targets) {
    const ElementRecord& e = *t.element;
    if (ambiguous.contains(e.id)) {
      ++result.drops.ambiguous;
      continue;
    }
    const bool is_textual = t.cls.textual;
    Rng rng = derive_rng(policy.seed, {snapshot.snapshot_id, e.id});

    std::optional<std::string> mllm;
    if (!is_textual && client != nullptr) {
      mllm = mllm_description(snapshot, e, *client, options.work_dir, shot);
      if (mllm) {
        ++result.mllm_annotated;
      } else {
        ++result.drops.augmentation_skipped;
      }
    }

    std::optional<Clause> label_clause;
    std::optional<Descriptor> descriptor = choose_primary_descriptor(e, is_textual, mllm, rng);
    if (is_labeled_control(e)) {
      std::optional<std::string> label = attribute_label(e);
      if (!label) {
        if (auto label_id = associate_label(e, visible)) {
          for (const auto& o : visible) {
            if (o.id == *label_id) label = collapse_whitespace(o.attr(Attribute::kInnerText));
          }
        }
      }
      if (label && !label->empty()) {
        label_clause = Clause{contextual_phrase(e, *label), ReType::kContextual};
        if (!descriptor) descriptor = Descriptor{*label, DescriptorSource::kInnerText};
      }
    }
    if (!descriptor) {
      ++result.drops.no_descriptor;
      continue;
    }

    const auto pool =
        relation_pool(e, visible, options.caps.rel_dist, options.max_anchor_chars, ambiguous);
    const std::size_t budget = kMaxRelativeClauses - (label_clause ? 1 : 0);
    const auto clauses = choose_relative_clauses(pool, budget, policy, rng);
    ReferringExpression re = assemble_re(*descriptor, absolute_region(e.bbox, snapshot.canvas),
                                         clauses, label_clause, policy, rng);

    PriorityTier tier = PriorityTier::kInteractive;
    if (has_accessibility_label(e) || mllm) {
      tier = PriorityTier::kLabeled;
    } else if (is_textual) {
      tier = PriorityTier::kPureText;
    }
    candidates.push_back({e.id, tier});
    built.emplace(e.id, SelectedElement{&e, std::move(re)});
  }
  result.candidates = candidates.size();

  Rng select_rng = derive_rng(policy.seed, {snapshot.snapshot_id, "select"});
  const auto chosen = select_page_elements(candidates, select_rng, options.caps.page_elems);
  result.drops.not_selected = candidates.size() - chosen.size();

  // Emit in page order.
  std::set<std::string> keep(chosen.begin(), chosen.end());
  std::vector<SelectedElement> selected;
  selected.reserve(chosen.size());
  for (const auto& e : visible) {
    if (!keep.contains(e.id)) continue;
    SelectedElement s = std::move(built.at(e.id));
    s.element = &e;
    selected.push_back(std::move(s));
  }
  result.record = emit_samples(snapshot, selected);
  return result;
}

std::vector<std::filesystem::path> list_snapshot_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(dir, ec)) return {dir};
  if (!fs::is_directory(dir, ec)) throw DataError("no such snapshot directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

CorpusReport synthesize_corpus(const std::vector<std::filesystem::path>& files,
                               const std::filesystem::path& out, const SynthesisOptions& options,
                               AugmentationClient* client, const ProgressFn& progress) {
  CorpusReport report;
  const std::filesystem::path part = out.string() + ".part";
  {
    std::ofstream os(part, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot write " + part.string());

    const std::size_t jobs = static_cast<std::size_t>(std::max(1, options.jobs));
    const std::size_t window = std::max<std::size_t>(jobs * 4, 16);
    for (std::size_t begin = 0; begin < files.size(); begin += window) {
      const std::size_t end = std::min(files.size(), begin + window);
      std::vector<std::optional<SnapshotResult>> results(end - begin);
      std::vector<std::exception_ptr> errors(end - begin);
      std::atomic<std::size_t> next{begin};
      auto work = [&] {
        for (std::size_t i = next++; i < end; i = next++) {
          try {
            const PageSnapshot snap = load_snapshot(files[i]);
            results[i - begin] =
                synthesize_snapshot(snap, options, client, files[i].parent_path());
          } catch (...) {
            errors[i - begin] = std::current_exception();
          }
        }
      };
      {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < std::min(jobs, end - begin); ++w) pool.emplace_back(work);
        work();
      }
      for (std::size_t i = 0; i < results.size(); ++i) {
        if (errors[i]) {
          try {
            std::rethrow_exception(errors[i]);
          } catch (const RemoteError&) {
            throw;
          } catch (const std::exception& e) {
            throw DataError(files[begin + i].string() + ": " + e.what());
          }
        }
        SnapshotResult& r = *results[i];
        ++report.snapshots;
        report.candidates += r.candidates;
        report.mllm_annotated += r.mllm_annotated;
        report.drops += r.drops;
        if (r.record) os << serialize_record(*r.record) << '\n';
      }
      if (progress) progress(end, files.size());
    }
    os.flush();
    if (!os) throw DataError("write failed: " + part.string());
  }
  report.downsample =
      downsample_file(part, out, options.caps.label_cap, options.policy.seed);
  std::filesystem::remove(part);
  report.records = report.downsample.records_out;
  report.samples = report.downsample.samples_out;
  report.drops.label_downsampled = report.downsample.samples_in - report.downsample.samples_out;
  return report;
}

std::optional<GroundingSample> describe_direct(const PageSnapshot& snapshot,
                                               const ElementRecord& element,
                                               AugmentationClient& client,
                                               const std::filesystem::path& work_dir,
                                               DirectStyle style,
                                               const std::filesystem::path& base_dir) {
  std::string annotated = snapshot.screenshot_ref;
  if (!client.mock()) {
    const auto dir = scratch_dir(work_dir) / "marked";
    std::filesystem::create_directories(dir);
    const auto path = dir / (hex(hash_keys(0, {snapshot.snapshot_id, element.id})) + ".png");
    try {
      annotated = render_marker(resolve(base_dir, snapshot.screenshot_ref), element.bbox, path)
                      .string();
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  }
  auto result = client.direct_describe(annotated, style);
  if (!result || !result->visible) return std::nullopt;
  ReferringExpression re;
  re.text = result->description;
  re.descriptor = result->description;
  re.descriptor_source = DescriptorSource::kMllmDescription;
  re.re_types = descriptor_types(re.descriptor_source);
  return make_sample(snapshot.snapshot_id, snapshot.screenshot_ref, element, std::move(re));
}

}  // namespace webground
