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

#include "webground/adapters.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>

#include "json.hpp"
#include "webground/errors.h"
#include "webground/random.h"
#include "webground/text.h"

namespace webground {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<SourceName, std::string_view>, 6> kSourceNames = {{
    {SourceName::kGuiAct, "guiact"},
    {SourceName::kAndroidControl, "androidcontrol"},
    {SourceName::kWidgetCaption, "widget_caption"},
    {SourceName::kUiBert, "uibert"},
    {SourceName::kAitz, "aitz"},
    {SourceName::kWebDirect, "web_direct"},
}};

constexpr std::size_t kCaptionsPerElement = 2;

const json* lookup(const json& doc, const std::string& pointer) {
  if (pointer.empty()) return nullptr;
  try {
    const json& v = doc.at(json::json_pointer(pointer));
    return v.is_null() ? nullptr : &v;
  } catch (const json::exception&) {
    return nullptr;
  }
}

std::optional<std::string> string_at(const json& doc, const std::string& pointer) {
  const json* v = lookup(doc, pointer);
  if (v == nullptr) return std::nullopt;
  if (v->is_string()) return v->get<std::string>();
  if (v->is_number_integer()) return std::to_string(v->get<long long>());
  return std::nullopt;
}

std::optional<double> number_at(const json& doc, const std::string& pointer) {
  const json* v = lookup(doc, pointer);
  if (v == nullptr || !v->is_number()) return std::nullopt;
  return v->get<double>();
}

std::optional<std::array<double, 4>> read_quad(const json& v, BBoxFormat format) {
  std::array<double, 4> q{};
  if (v.is_array() && v.size() == 4) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (!v[i].is_number()) return std::nullopt;
      q[i] = v[i].get<double>();
    }
  } else if (v.is_object()) {
    const char* const keys[2][4] = {{"x", "y", "w", "h"}, {"x0", "y0", "x1", "y1"}};
    const auto& names = keys[format == BBoxFormat::kXywh ? 0 : 1];
    for (std::size_t i = 0; i < 4; ++i) {
      auto it = v.find(names[i]);
      if (it == v.end() || !it->is_number()) return std::nullopt;
      q[i] = it->get<double>();
    }
  } else {
    return std::nullopt;
  }
  // Corners, so xyxy input never goes through a lossy subtraction.
  if (format == BBoxFormat::kXywh) {
    q[2] += q[0];
    q[3] += q[1];
  }
  return q;
}

std::optional<std::array<double, 2>> read_pair(const json& v) {
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return std::array<double, 2>{v[0].get<double>(), v[1].get<double>()};
  }
  if (v.is_object() && v.contains("x") && v.contains("y") && v["x"].is_number() &&
      v["y"].is_number()) {
    return std::array<double, 2>{v["x"].get<double>(), v["y"].get<double>()};
  }
  return std::nullopt;
}

// Floor, tolerating products like 0.29 * 100 = 28.999999999999996.
double scaled(double v, double s) { return std::floor(v * s + 1e-6); }

enum class BoxStatus { kOk, kMissing, kInvalid };

BoxStatus read_box(const SourceProfile& p, const json& doc, BBox& out) {
  double sx = 1.0;
  double sy = 1.0;
  if (p.normalized) {
    auto w = number_at(doc, p.image_width);
    auto h = number_at(doc, p.image_height);
    if (!w || !h || *w <= 0 || *h <= 0) return BoxStatus::kInvalid;
    sx = *w;
    sy = *h;
  }
  if (const json* v = lookup(doc, p.bbox)) {
    auto q = read_quad(*v, p.bbox_format);
    if (!q) return BoxStatus::kInvalid;
    const double x0 = scaled((*q)[0], sx);
    const double y0 = scaled((*q)[1], sy);
    const double x1 = scaled((*q)[2], sx);
    const double y1 = scaled((*q)[3], sy);
    out = {static_cast<int>(x0), static_cast<int>(y0), static_cast<int>(x1 - x0),
           static_cast<int>(y1 - y0)};
  } else if (const json* pt = lookup(doc, p.point)) {
    auto xy = read_pair(*pt);
    if (!xy) return BoxStatus::kInvalid;
    out = {static_cast<int>(scaled((*xy)[0], sx)), static_cast<int>(scaled((*xy)[1], sy)), 1, 1};
  } else {
    return BoxStatus::kMissing;
  }
  if (out.w <= 0 || out.h <= 0 || out.x < 0 || out.y < 0) return BoxStatus::kInvalid;
  return BoxStatus::kOk;
}

ReferringExpression annotated_re(std::string text, DescriptorSource source) {
  ReferringExpression re;
  re.text = text;
  re.descriptor = std::move(text);
  re.descriptor_source = source;
  re.re_types = descriptor_types(source);
  return re;
}

std::string profile_string(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) return {};
  if (!it->is_string()) throw ValidationError(key, "expected a string");
  return it->get<std::string>();
}

}  // namespace

std::string_view source_name(SourceName s) {
  for (const auto& [n, name] : kSourceNames) {
    if (n == s) return name;
  }
  return "unknown";
}

std::optional<SourceName> source_from_name(std::string_view name) {
  for (const auto& [n, s] : kSourceNames) {
    if (s == name) return n;
  }
  return std::nullopt;
}

SourceProfile parse_profile(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!doc.is_object()) throw ValidationError("$", "profile must be an object");
  SourceProfile p;
  const std::string source = profile_string(doc, "source");
  if (source.empty()) throw ValidationError("source", "missing required field");
  auto name = source_from_name(source);
  if (!name) throw ValidationError("source", "unknown source " + source);
  p.source = *name;
  const std::string format = profile_string(doc, "format");
  if (!format.empty() && format != "jsonl" && format != "json") {
    throw ValidationError("format", "expected jsonl or json");
  }
  p.jsonl = format != "json";
  p.records = profile_string(doc, "records");
  const json fields = doc.value("fields", json::object());
  if (!fields.is_object()) throw ValidationError("fields", "expected an object");
  const std::pair<const char*, std::string*> slots[] = {
      {"id", &p.id},
      {"screenshot", &p.screenshot},
      {"tag", &p.tag},
      {"bbox", &p.bbox},
      {"point", &p.point},
      {"image_width", &p.image_width},
      {"image_height", &p.image_height},
      {"text", &p.text},
      {"action", &p.action},
      {"captions", &p.captions},
      {"thought", &p.thought},
      {"multi_step", &p.multi_step},
      {"visible", &p.visible},
  };
  for (const auto& [key, slot] : slots) {
    *slot = profile_string(fields, key);
    if (!slot->empty() && slot->front() != '/') {
      throw ValidationError(std::string("fields.") + key, "expected a JSON pointer");
    }
  }
  const std::string bbox_format = profile_string(doc, "bbox_format");
  if (bbox_format == "xyxy") {
    p.bbox_format = BBoxFormat::kXyxy;
  } else if (!bbox_format.empty() && bbox_format != "xywh") {
    throw ValidationError("bbox_format", "expected xywh or xyxy");
  }
  p.normalized = doc.value("normalized", false);
  return p;
}

SourceProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open profile " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_profile(text);
}

bool looks_multi_step(std::string_view text) {
  static const std::regex kThen(R"(\bthen\b)", std::regex::icase);
  return std::regex_search(text.begin(), text.end(), kThen);
}

std::vector<GroundingSample> adapt_record(const SourceSpec& spec, std::string_view raw,
                                          std::size_t index, std::uint64_t seed,
                                          AdaptCounts& counts) {
  const SourceProfile& p = spec.profile;
  ++counts.records_in;
  json doc;
  try {
    doc = json::parse(raw);
  } catch (const json::parse_error&) {
    ++counts.unmappable;
    return {};
  }
  if (!doc.is_object()) {
    ++counts.unmappable;
    return {};
  }
  const std::string id =
      string_at(doc, p.id).value_or(std::string(source_name(spec.name)) + "-" +
                                    std::to_string(index));

  if (spec.name == SourceName::kWebDirect) {
    const json* vis = lookup(doc, p.visible);
    if (vis != nullptr && vis->is_boolean() && !vis->get<bool>()) {
      ++counts.not_visible;
      return {};
    }
  }
  if (spec.name == SourceName::kGuiAct) {
    const json* flag = lookup(doc, p.multi_step);
    const bool flagged = flag != nullptr && flag->is_boolean() && flag->get<bool>();
    if (flagged || looks_multi_step(string_at(doc, p.text).value_or("")) ||
        looks_multi_step(string_at(doc, p.action).value_or(""))) {
      ++counts.multi_step;
      return {};
    }
  }

  const std::string screenshot = string_at(doc, p.screenshot).value_or("");
  if (screenshot.empty()) {
    ++counts.unmappable;
    return {};
  }
  BBox box;
  switch (read_box(p, doc, box)) {
    case BoxStatus::kOk:
      break;
    case BoxStatus::kMissing:
      ++counts.no_coordinates;
      return {};
    case BoxStatus::kInvalid:
      ++counts.unmappable;
      return {};
  }

  std::vector<ReferringExpression> res;
  auto add_text = [&](const std::string& pointer, DescriptorSource source) {
    std::string text = collapse_whitespace(string_at(doc, pointer).value_or(""));
    if (!text.empty()) res.push_back(annotated_re(std::move(text), source));
  };
  switch (spec.name) {
    case SourceName::kGuiAct:
      add_text(p.text, DescriptorSource::kAnnotation);
      add_text(p.action, DescriptorSource::kAnnotation);
      break;
    case SourceName::kAndroidControl:
    case SourceName::kUiBert:
      add_text(p.text, DescriptorSource::kAnnotation);
      break;
    case SourceName::kAitz:
      add_text(p.thought, DescriptorSource::kAnnotation);
      break;
    case SourceName::kWebDirect:
      add_text(p.text, DescriptorSource::kMllmDescription);
      break;
    case SourceName::kWidgetCaption: {
      std::vector<std::string> captions;
      if (const json* arr = lookup(doc, p.captions); arr != nullptr && arr->is_array()) {
        for (const auto& c : *arr) {
          if (!c.is_string()) continue;
          std::string text = collapse_whitespace(c.get<std::string>());
          if (!text.empty()) captions.push_back(std::move(text));
        }
      }
      Rng rng = derive_rng(seed, {source_name(spec.name), id});
      std::vector<std::size_t> order(captions.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      const std::size_t take = std::min(kCaptionsPerElement, order.size());
      for (std::size_t i = 0; i < take; ++i) {
        std::swap(order[i], order[i + rng.uniform_index(order.size() - i)]);
      }
      order.resize(take);
      std::sort(order.begin(), order.end());
      for (std::size_t i : order) {
        res.push_back(annotated_re(captions[i], DescriptorSource::kAnnotation));
      }
      break;
    }
  }
  if (res.empty()) {
    ++counts.unmappable;
    return {};
  }

  ElementRecord element;
  element.id = id;
  element.tag = normalize_text(string_at(doc, p.tag).value_or(""));
  element.bbox = box;
  std::vector<GroundingSample> out;
  for (std::size_t i = 0; i < res.size(); ++i) {
    GroundingSample s = make_sample(screenshot, screenshot, element, std::move(res[i]));
    if (res.size() > 1) s.element_id += "#" + std::to_string(i);
    out.push_back(std::move(s));
  }
  ++counts.records_emitted;
  counts.samples += out.size();
  return out;
}

AdaptCounts adapt_source(const SourceSpec& spec, std::uint64_t seed,
                         const std::function<void(const ScreenshotRecord&)>& sink) {
  if (spec.profile.source != spec.name) {
    throw DataError("profile is for source " + std::string(source_name(spec.profile.source)) +
                    ", not " + std::string(source_name(spec.name)));
  }
  std::ifstream in(spec.path, std::ios::binary);
  if (!in) throw DataError("cannot open " + spec.path.string());

  AdaptCounts counts;
  ScreenshotRecord pending;
  auto flush = [&] {
    if (!pending.samples.empty()) sink(pending);
    pending = {};
  };
  auto consume = [&](std::string_view raw, std::size_t index) {
    for (auto& s : adapt_record(spec, raw, index, seed, counts)) {
      if (!pending.samples.empty() && pending.screenshot_ref != s.screenshot_ref) flush();
      if (pending.samples.empty()) {
        pending.snapshot_id = s.snapshot_id;
        pending.screenshot_ref = s.screenshot_ref;
      }
      s.snapshot_id = pending.snapshot_id;
      pending.samples.push_back(std::move(s));
    }
  };

  if (spec.profile.jsonl) {
    std::string line;
    std::size_t index = 0;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      consume(line, index++);
    }
  } else {
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ParseError(spec.path.string() + ": " + e.what(), e.byte);
    }
    const json* arr = spec.profile.records.empty() ? &doc : lookup(doc, spec.profile.records);
    if (arr == nullptr || !arr->is_array()) {
      throw DataError(spec.path.string() + ": no record array at '" + spec.profile.records + "'");
    }
    for (std::size_t i = 0; i < arr->size(); ++i) consume((*arr)[i].dump(), i);
  }
  flush();
  return counts;
}

AdaptCounts adapt_to_file(const SourceSpec& spec, std::uint64_t seed,
                          const std::filesystem::path& out) {
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write " + out.string());
  AdaptCounts counts =
      adapt_source(spec, seed, [&](const ScreenshotRecord& r) { os << serialize_record(r) << '\n'; });
  os.flush();
  if (!os) throw DataError("write failed: " + out.string());
  return counts;
}

}  // namespace webground
