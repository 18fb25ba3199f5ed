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

#include "webground/eval.h"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "webground/errors.h"
#include "webground/resolution.h"

namespace webground {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::string_view, 3> kPlatformNames = {"mobile", "desktop", "web"};
constexpr std::array<std::string_view, 2> kElemTypeNames = {"text", "icon_widget"};

json parse_line(const std::string& line, std::size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), e.byte);
  }
}

int get_int(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    throw ValidationError(where + "." + key, "expected integer");
  }
  return it->get<int>();
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ValidationError(where + "." + key, "expected string");
  }
  return it->get<std::string>();
}

std::string format_pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string_view platform_name(Platform p) { return kPlatformNames[static_cast<std::size_t>(p)]; }
std::string_view elem_type_name(ElemType t) { return kElemTypeNames[static_cast<std::size_t>(t)]; }

std::optional<Platform> platform_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kPlatformNames.size(); ++i) {
    if (kPlatformNames[i] == s) return static_cast<Platform>(i);
  }
  return std::nullopt;
}

std::optional<ElemType> elem_type_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kElemTypeNames.size(); ++i) {
    if (kElemTypeNames[i] == s) return static_cast<ElemType>(i);
  }
  if (s == "icon" || s == "widget") return ElemType::kIconWidget;
  return std::nullopt;
}

bool score_grounding(Point pred, const BBox& gold) { return contains_inclusive(gold, pred); }

EvalRecord make_eval_record(std::string id, std::optional<Point> pred, const BBox& gold,
                            Platform platform, ElemType type) {
  EvalRecord r;
  r.id = std::move(id);
  r.pred = pred;
  r.gold_bbox = gold;
  r.platform = platform;
  r.elem_type = type;
  r.correct = pred.has_value() && score_grounding(*pred, gold);
  return r;
}

std::optional<double> AccuracyTable::accuracy(Platform p, ElemType t) const {
  const CellStats& c = cell(p, t);
  if (c.total == 0) return std::nullopt;
  return c.accuracy();
}

std::optional<double> AccuracyTable::cell_mean() const {
  double sum = 0.0;
  int n = 0;
  for (Platform p : kPlatforms) {
    for (ElemType t : kElemTypes) {
      if (auto a = accuracy(p, t)) {
        sum += *a;
        ++n;
      }
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::optional<double> AccuracyTable::sample_weighted() const {
  std::size_t correct = 0;
  std::size_t total = 0;
  for (const auto& row : cells) {
    for (const auto& c : row) {
      correct += c.correct;
      total += c.total;
    }
  }
  if (total == 0) return std::nullopt;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

std::size_t AccuracyTable::total() const {
  std::size_t total = 0;
  for (const auto& row : cells) {
    for (const auto& c : row) total += c.total;
  }
  return total;
}

AccuracyTable aggregate_screenspot(std::span<const EvalRecord> records) {
  AccuracyTable t;
  for (const auto& r : records) {
    auto& c = t.cells[static_cast<std::size_t>(r.platform)][static_cast<std::size_t>(r.elem_type)];
    ++c.total;
    if (r.correct) ++c.correct;
  }
  return t;
}

std::string accuracy_table_json(const AccuracyTable& t) {
  ordered_json doc;
  ordered_json cells = ordered_json::array();
  for (Platform p : kPlatforms) {
    for (ElemType e : kElemTypes) {
      const CellStats& c = t.cell(p, e);
      ordered_json cell;
      cell["platform"] = platform_name(p);
      cell["elem_type"] = elem_type_name(e);
      cell["correct"] = c.correct;
      cell["total"] = c.total;
      if (c.total > 0) {
        cell["accuracy"] = c.accuracy();
      } else {
        cell["accuracy"] = nullptr;
      }
      cells.push_back(std::move(cell));
    }
  }
  doc["cells"] = std::move(cells);
  const auto mean = t.cell_mean();
  const auto pooled = t.sample_weighted();
  doc["average_cell_mean"] = mean ? ordered_json(*mean) : ordered_json(nullptr);
  doc["average_sample_weighted"] = pooled ? ordered_json(*pooled) : ordered_json(nullptr);
  doc["total"] = t.total();
  return doc.dump(2);
}

std::string accuracy_table_text(const AccuracyTable& t) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %12s %12s\n", "platform", "text", "icon_widget");
  out << line;
  for (Platform p : kPlatforms) {
    std::string cols[2];
    for (ElemType e : kElemTypes) {
      const auto a = t.accuracy(p, e);
      cols[static_cast<std::size_t>(e)] = a ? format_pct(*a) : "-";
    }
    std::snprintf(line, sizeof(line), "%-10s %12s %12s\n", std::string(platform_name(p)).c_str(),
                  cols[0].c_str(), cols[1].c_str());
    out << line;
  }
  const auto mean = t.cell_mean();
  const auto pooled = t.sample_weighted();
  out << "average (cell mean):       " << (mean ? format_pct(*mean) : "-") << "\n";
  out << "average (sample weighted): " << (pooled ? format_pct(*pooled) : "-") << "\n";
  return out.str();
}

std::vector<Block> split_page_blocks(int canvas_height, int block_height) {
  if (canvas_height <= 0 || block_height <= 0) {
    throw std::invalid_argument("heights must be positive");
  }
  std::vector<Block> blocks;
  for (int y = 0; y < canvas_height; y += block_height) {
    blocks.push_back({y, std::min(block_height, canvas_height - y)});
  }
  return blocks;
}

std::optional<std::string> snap_to_element(Point p, std::span<const ElementRecord> elements) {
  const ElementRecord* best = nullptr;
  for (const auto& e : elements) {
    if (!e.visible || !contains_inclusive(e.bbox, p)) continue;
    if (best == nullptr || e.bbox.area() < best->bbox.area() ||
        (e.bbox.area() == best->bbox.area() && e.id < best->id)) {
      best = &e;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

std::map<std::string, Point> read_predictions(std::istream& in) {
  std::map<std::string, Point> preds;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json doc = parse_line(line, line_no);
    const std::string where = "line " + std::to_string(line_no);
    const std::string id = get_string(doc, "id", where);
    if (auto it = doc.find("point"); it != doc.end() && it->is_object()) {
      preds[id] = {get_int(*it, "x", where + ".point"), get_int(*it, "y", where + ".point")};
    } else if (auto ans = doc.find("answer"); ans != doc.end() && ans->is_string()) {
      try {
        preds[id] = parse_coordinates(ans->get<std::string>());
      } catch (const ParseError&) {
        // Unparseable answers count as wrong, same as missing ones.
      }
    } else {
      throw ValidationError(where + ".point", "missing point");
    }
  }
  return preds;
}

std::vector<GoldRecord> read_gold(std::istream& in) {
  std::vector<GoldRecord> gold;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json doc = parse_line(line, line_no);
    const std::string where = "line " + std::to_string(line_no);
    GoldRecord g;
    g.id = get_string(doc, "id", where);
    auto box = doc.find("bbox");
    if (box == doc.end() || !box->is_object()) throw ValidationError(where + ".bbox", "missing bbox");
    g.bbox = {get_int(*box, "x", where + ".bbox"), get_int(*box, "y", where + ".bbox"),
              get_int(*box, "w", where + ".bbox"), get_int(*box, "h", where + ".bbox")};
    if (g.bbox.w <= 0 || g.bbox.h <= 0) throw ValidationError(where + ".bbox", "empty box");
    const std::string platform = get_string(doc, "platform", where);
    const auto p = platform_from_name(platform);
    if (!p) throw ValidationError(where + ".platform", "unknown platform '" + platform + "'");
    g.platform = *p;
    const std::string type = get_string(doc, "elem_type", where);
    const auto t = elem_type_from_name(type);
    if (!t) throw ValidationError(where + ".elem_type", "unknown element type '" + type + "'");
    g.elem_type = *t;
    gold.push_back(std::move(g));
  }
  return gold;
}

JoinedEval join_predictions(std::span<const GoldRecord> gold,
                            const std::map<std::string, Point>& preds) {
  JoinedEval out;
  out.records.reserve(gold.size());
  for (const auto& g : gold) {
    auto it = preds.find(g.id);
    std::optional<Point> pred;
    if (it == preds.end()) {
      ++out.missing_predictions;
    } else {
      pred = it->second;
    }
    out.records.push_back(make_eval_record(g.id, pred, g.bbox, g.platform, g.elem_type));
  }
  return out;
}

}  // namespace webground
