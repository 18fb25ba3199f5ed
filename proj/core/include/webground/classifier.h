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

#ifndef WEBGROUND_CLASSIFIER_H_
#define WEBGROUND_CLASSIFIER_H_

#include <set>
#include <span>
#include <string>
#include <string_view>

#include "webground/snapshot.h"

namespace webground {

inline constexpr double kTextualSimilarityThreshold = 0.7;

enum class ElementKind { kInteractive, kPureText, kOther };

struct ElementClass {
  ElementKind kind = ElementKind::kOther;
  // Only interactive elements carry this flag. Pure-text elements are
  // textual by definition and are tracked through `kind`.
  bool textual = false;
};

ElementKind classify_tag(std::string_view tag);
inline ElementKind classify_element(const ElementRecord& e) { return classify_tag(e.tag); }

// Levenshtein distance over code points.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

// 1 - dist / max(len) over normalized text. Two empty strings score 1.
double text_similarity(std::string_view a, std::string_view b);

// OCR text agrees with inner_text closely enough to treat the element as
// plain text. Elements without OCR output or without inner text are not
// textual.
bool is_textual(const ElementRecord& e, double threshold = kTextualSimilarityThreshold);

ElementClass classify(const ElementRecord& e, double threshold = kTextualSimilarityThreshold);

// Ids of every element whose normalized inner text is shared with at least
// one other element in `elements`.
std::set<std::string> dedup_ambiguous(std::span<const ElementRecord> elements);

}  // namespace webground

#endif  // WEBGROUND_CLASSIFIER_H_
