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

#ifndef WEBGROUND_EVAL_H_
#define WEBGROUND_EVAL_H_

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "webground/geometry.h"
#include "webground/snapshot.h"

namespace webground {

inline constexpr int kBlockWidth = 1280;
inline constexpr int kBlockHeight = 1000;

enum class Platform { kMobile, kDesktop, kWeb };
enum class ElemType { kText, kIconWidget };

inline constexpr std::array<Platform, 3> kPlatforms = {Platform::kMobile, Platform::kDesktop,
                                                       Platform::kWeb};
inline constexpr std::array<ElemType, 2> kElemTypes = {ElemType::kText, ElemType::kIconWidget};

std::string_view platform_name(Platform p);
std::string_view elem_type_name(ElemType t);
std::optional<Platform> platform_from_name(std::string_view s);
std::optional<ElemType> elem_type_from_name(std::string_view s);

// Inclusive on all four edges.
bool score_grounding(Point pred, const BBox& gold);

// Element accuracy as reported for full-page web tasks; same predicate.
inline bool score_element_accuracy(Point pred, const BBox& gold_element) {
  return score_grounding(pred, gold_element);
}

struct EvalRecord {
  std::string id;
  std::optional<Point> pred;  // missing or unparseable predictions score false
  BBox gold_bbox;
  Platform platform = Platform::kWeb;
  ElemType elem_type = ElemType::kText;
  bool correct = false;
};

EvalRecord make_eval_record(std::string id, std::optional<Point> pred, const BBox& gold,
                            Platform platform, ElemType type);

struct CellStats {
  std::size_t correct = 0;
  std::size_t total = 0;

  double accuracy() const { return total == 0 ? 0.0 : 100.0 * correct / total; }
};

// Platform x element-type accuracy. Empty cells are absent rather than 0.
struct AccuracyTable {
  std::array<std::array<CellStats, 2>, 3> cells{};

  const CellStats& cell(Platform p, ElemType t) const {
    return cells[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)];
  }
  std::optional<double> accuracy(Platform p, ElemType t) const;
  // Unweighted mean over non-empty cells.
  std::optional<double> cell_mean() const;
  // Pooled correct / total over every record.
  std::optional<double> sample_weighted() const;
  std::size_t total() const;
};

AccuracyTable aggregate_screenspot(std::span<const EvalRecord> records);

// JSON report with one entry per cell plus both averages.
std::string accuracy_table_json(const AccuracyTable& t);
// Fixed-width text rendering of the same table.
std::string accuracy_table_text(const AccuracyTable& t);

struct Block {
  int y_offset = 0;
  int height = 0;

  friend bool operator==(const Block&, const Block&) = default;
};

// Viewport-height blocks from the top; the last one may be shorter.
std::vector<Block> split_page_blocks(int canvas_height, int block_height = kBlockHeight);

// Smallest-area visible element containing `p` (inclusive); ties go to the
// smaller id.
std::optional<std::string> snap_to_element(Point p, std::span<const ElementRecord> elements);

// Predictions JSONL: {"id", "point": {"x","y"}} or {"id", "answer": "(x, y)"}.
std::map<std::string, Point> read_predictions(std::istream& in);

struct GoldRecord {
  std::string id;
  BBox bbox;
  Platform platform = Platform::kWeb;
  ElemType elem_type = ElemType::kText;
};

// Gold JSONL: {"id", "bbox": {"x","y","w","h"}, "platform", "elem_type"}.
std::vector<GoldRecord> read_gold(std::istream& in);

struct JoinedEval {
  std::vector<EvalRecord> records;
  std::size_t missing_predictions = 0;
};

JoinedEval join_predictions(std::span<const GoldRecord> gold,
                            const std::map<std::string, Point>& preds);

}  // namespace webground

#endif  // WEBGROUND_EVAL_H_
