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

#include "webground/sampler.h"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "webground/errors.h"
#include "webground/resolution.h"
#include "webground/text.h"

namespace webground {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kQuestionPrefix =
    "In the screenshot, what are the pixel element coordinates corresponding to ";

ordered_json sample_json(const GroundingSample& s) {
  ordered_json j;
  j["element_id"] = s.element_id;
  j["tag"] = s.tag;
  j["bbox"] = {{"x", s.bbox.x}, {"y", s.bbox.y}, {"w", s.bbox.w}, {"h", s.bbox.h}};
  j["target"] = {{"x", s.target.x}, {"y", s.target.y}};
  j["re_text"] = s.re.text;
  ordered_json types = ordered_json::array();
  for (ReType t : s.re.re_types.values()) types.push_back(re_type_name(t));
  j["re_types"] = std::move(types);
  j["descriptor_source"] = descriptor_source_name(s.re.descriptor_source);
  j["descriptor"] = s.re.descriptor;
  j["question"] = grounding_question(s.re.text);
  j["answer"] = grounding_answer(s.target);
  return j;
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + "." + key, "missing required field");
  return *it;
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) throw ValidationError(where + "." + key, "expected string");
  return v.get<std::string>();
}

int int_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) throw ValidationError(where + "." + key, "expected integer");
  return v.get<int>();
}

double pct(std::size_t n, std::size_t total) {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(n) / static_cast<double>(total);
}

}  // namespace

GroundingSample make_sample(std::string_view snapshot_id, std::string_view screenshot_ref,
                            const ElementRecord& element, ReferringExpression re) {
  GroundingSample s;
  s.snapshot_id = snapshot_id;
  s.screenshot_ref = screenshot_ref;
  s.element_id = element.id;
  s.tag = element.tag;
  s.re = std::move(re);
  s.bbox = element.bbox;
  s.target = center_point(element.bbox);
  return s;
}

std::string grounding_question(std::string_view description) {
  std::string q(kQuestionPrefix);
  q.append(description);
  q.push_back('?');
  return q;
}

std::string grounding_answer(Point target) { return format_coordinates(target); }

std::string serialize_record(const ScreenshotRecord& r) {
  ordered_json doc;
  doc["snapshot_id"] = r.snapshot_id;
  doc["screenshot_ref"] = r.screenshot_ref;
  ordered_json samples = ordered_json::array();
  for (const auto& s : r.samples) samples.push_back(sample_json(s));
  doc["samples"] = std::move(samples);
  return doc.dump();
}

ScreenshotRecord parse_record(std::string_view line) {
  json doc;
  try {
    doc = json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed record: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ValidationError("$", "expected object");
  ScreenshotRecord r;
  r.snapshot_id = string_field(doc, "snapshot_id", "$");
  r.screenshot_ref = string_field(doc, "screenshot_ref", "$");
  const json& samples = field(doc, "samples", "$");
  if (!samples.is_array()) throw ValidationError("$.samples", "expected array");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string where = "$.samples[" + std::to_string(i) + "]";
    const json& j = samples[i];
    GroundingSample s;
    s.snapshot_id = r.snapshot_id;
    s.screenshot_ref = r.screenshot_ref;
    s.element_id = string_field(j, "element_id", where);
    s.tag = string_field(j, "tag", where);
    const json& box = field(j, "bbox", where);
    s.bbox = {int_field(box, "x", where + ".bbox"), int_field(box, "y", where + ".bbox"),
              int_field(box, "w", where + ".bbox"), int_field(box, "h", where + ".bbox")};
    const json& target = field(j, "target", where);
    s.target = {int_field(target, "x", where + ".target"), int_field(target, "y", where + ".target")};
    s.re.text = string_field(j, "re_text", where);
    const json& types = field(j, "re_types", where);
    if (!types.is_array()) throw ValidationError(where + ".re_types", "expected array");
    for (const auto& t : types) {
      const auto type = t.is_string() ? re_type_from_name(t.get<std::string>()) : std::nullopt;
      if (!type) throw ValidationError(where + ".re_types", "unknown RE type");
      s.re.re_types.insert(*type);
    }
    const std::string source = string_field(j, "descriptor_source", where);
    const auto src = descriptor_source_from_name(source);
    if (!src) throw ValidationError(where + ".descriptor_source", "unknown source '" + source + "'");
    s.re.descriptor_source = *src;
    if (auto it = j.find("descriptor"); it != j.end() && it->is_string()) {
      s.re.descriptor = it->get<std::string>();
    } else {
      s.re.descriptor = s.re.text;
    }
    r.samples.push_back(std::move(s));
  }
  return r;
}

std::optional<ScreenshotRecord> emit_samples(const PageSnapshot& snapshot,
                                             std::span<const SelectedElement> selected) {
  if (selected.empty()) return std::nullopt;
  ScreenshotRecord r;
  r.snapshot_id = snapshot.snapshot_id;
  r.screenshot_ref = snapshot.screenshot_ref;
  r.samples.reserve(selected.size());
  for (const auto& s : selected) {
    r.samples.push_back(make_sample(snapshot.snapshot_id, snapshot.screenshot_ref, *s.element, s.re));
  }
  return r;
}

std::size_t pure_text_cap(std::size_t labeled, std::size_t available_pure_text) {
  const std::size_t floor = std::min(kPureTextFloor, available_pure_text);
  return std::min(available_pure_text, std::max(kPureTextMultiplier * labeled, floor));
}

std::vector<std::string> select_page_elements(std::span<const SelectionCandidate> candidates,
                                              Rng& rng, std::size_t page_cap) {
  std::vector<std::string> labeled;
  std::vector<std::string> interactive;
  std::vector<std::string> pure;
  for (const auto& c : candidates) {
    switch (c.tier) {
      case PriorityTier::kLabeled:
        labeled.push_back(c.element_id);
        break;
      case PriorityTier::kInteractive:
        interactive.push_back(c.element_id);
        break;
      case PriorityTier::kPureText:
        pure.push_back(c.element_id);
        break;
    }
  }
  std::sort(labeled.begin(), labeled.end());
  std::sort(interactive.begin(), interactive.end());
  // Sorting first makes the random subset independent of input order.
  std::sort(pure.begin(), pure.end());
  rng.shuffle(pure.begin(), pure.end());
  pure.resize(pure_text_cap(labeled.size(), pure.size()));
  std::sort(pure.begin(), pure.end());

  std::vector<std::string> out;
  out.reserve(std::min(page_cap, labeled.size() + interactive.size() + pure.size()));
  for (auto* tier : {&labeled, &interactive, &pure}) {
    for (auto& id : *tier) {
      if (out.size() >= page_cap) return out;
      out.push_back(std::move(id));
    }
  }
  return out;
}

std::string label_key(const GroundingSample& s) { return normalize_text(s.re.descriptor); }

std::uint64_t sample_rank(const GroundingSample& s, std::uint64_t seed) {
  return hash_keys(seed, {s.snapshot_id, s.element_id, s.re.text});
}

LabelDownsampler::Key LabelDownsampler::key_of(const GroundingSample& s) const {
  std::string id = s.snapshot_id;
  id.push_back('\x1f');
  id += s.element_id;
  id.push_back('\x1f');
  id += s.re.text;
  return {sample_rank(s, seed_), std::move(id)};
}

void LabelDownsampler::count(const GroundingSample& s) { ++freq_[label_key(s)]; }

void LabelDownsampler::rank(const GroundingSample& s) {
  const std::string label = label_key(s);
  auto it = freq_.find(label);
  if (it == freq_.end() || it->second <= cap_) return;
  ranks_[label].push_back(key_of(s));
}

void LabelDownsampler::finalize() {
  for (auto& [label, keys] : ranks_) {
    if (cap_ == 0) {
      thresholds_[label] = {Key{0, {}}, 0, 0};
      continue;
    }
    auto nth = keys.begin() + static_cast<std::ptrdiff_t>(cap_ - 1);
    std::nth_element(keys.begin(), nth, keys.end());
    Threshold t;
    t.pivot = *nth;
    const auto less =
        static_cast<std::size_t>(std::count_if(keys.begin(), keys.end(),
                                               [&](const Key& k) { return k < t.pivot; }));
    t.allowed_equal = cap_ - less;
    thresholds_[label] = std::move(t);
  }
  ranks_.clear();
  finalized_ = true;
}

bool LabelDownsampler::keep(const GroundingSample& s) {
  if (!finalized_) finalize();
  auto it = thresholds_.find(label_key(s));
  if (it == thresholds_.end()) return true;
  Threshold& t = it->second;
  if (cap_ == 0) return false;
  const Key k = key_of(s);
  if (k < t.pivot) return true;
  if (k == t.pivot && t.kept_equal < t.allowed_equal) {
    ++t.kept_equal;
    return true;
  }
  return false;
}

std::size_t LabelDownsampler::capped_labels() const {
  return static_cast<std::size_t>(std::count_if(freq_.begin(), freq_.end(),
                                                [&](const auto& kv) { return kv.second > cap_; }));
}

std::vector<ScreenshotRecord> downsample_labels(std::vector<ScreenshotRecord> records,
                                                std::size_t cap, std::uint64_t seed) {
  LabelDownsampler ds(cap, seed);
  for (const auto& r : records) {
    for (const auto& s : r.samples) ds.count(s);
  }
  for (const auto& r : records) {
    for (const auto& s : r.samples) ds.rank(s);
  }
  std::vector<ScreenshotRecord> out;
  out.reserve(records.size());
  for (auto& r : records) {
    std::vector<GroundingSample> kept;
    for (auto& s : r.samples) {
      if (ds.keep(s)) kept.push_back(std::move(s));
    }
    if (kept.empty()) continue;
    r.samples = std::move(kept);
    out.push_back(std::move(r));
  }
  return out;
}

DownsampleReport downsample_file(const std::filesystem::path& in,
                                 const std::filesystem::path& out, std::size_t cap,
                                 std::uint64_t seed) {
  LabelDownsampler ds(cap, seed);
  DownsampleReport report;
  for_each_record(in, [&](const ScreenshotRecord& r) {
    ++report.records_in;
    for (const auto& s : r.samples) {
      ++report.samples_in;
      ds.count(s);
    }
  });
  for_each_record(in, [&](const ScreenshotRecord& r) {
    for (const auto& s : r.samples) ds.rank(s);
  });
  report.capped_labels = ds.capped_labels();
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write " + out.string());
  for_each_record(in, [&](ScreenshotRecord r) {
    std::vector<GroundingSample> kept;
    for (auto& s : r.samples) {
      if (ds.keep(s)) kept.push_back(std::move(s));
    }
    if (kept.empty()) return;
    r.samples = std::move(kept);
    report.samples_out += r.samples.size();
    ++report.records_out;
    os << serialize_record(r) << '\n';
  });
  if (!os) throw DataError("write failed for " + out.string());
  return report;
}

void StatsAccumulator::add(const GroundingSample& s) {
  ++total_;
  ++tags_[s.tag];
  ++sources_[std::string(descriptor_source_name(s.re.descriptor_source))];
  const bool contextual = s.re.re_types.contains(ReType::kContextual);
  if (contextual || s.re.re_types.contains(ReType::kRelativePositional)) ++relative_;
  if (contextual) ++contextual_;
  if (s.re.re_types.contains(ReType::kAbsolutePositional)) ++absolute_;
}

void StatsAccumulator::add(const ScreenshotRecord& r) {
  for (const auto& s : r.samples) add(s);
}

StatsReport StatsAccumulator::report() const {
  StatsReport r;
  r.total = total_;
  for (const auto& [tag, n] : tags_) r.tag_shares[tag] = pct(n, total_);
  for (const auto& [src, n] : sources_) r.descriptor_shares[src] = pct(n, total_);
  r.relative = pct(relative_, total_);
  r.contextual = pct(contextual_, total_);
  r.absolute = pct(absolute_, total_);
  return r;
}

StatsReport corpus_stats(std::span<const GroundingSample> samples) {
  StatsAccumulator acc;
  for (const auto& s : samples) acc.add(s);
  return acc.report();
}

std::string serialize_stats(const StatsReport& r) {
  ordered_json doc;
  doc["total"] = r.total;
  doc["tag_shares"] = r.tag_shares;
  doc["descriptor_shares"] = r.descriptor_shares;
  doc["re_type_shares"] = {{"relative", r.relative},
                           {"contextual", r.contextual},
                           {"absolute", r.absolute}};
  return doc.dump(2);
}

}  // namespace webground
