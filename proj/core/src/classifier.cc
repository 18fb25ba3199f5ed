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

#include "webground/classifier.h"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <vector>

#include "webground/text.h"

namespace webground {
namespace {

constexpr std::array<std::string_view, 8> kInteractiveTags = {
    "a", "img", "button", "input", "svg", "select", "textarea", "video",
};
constexpr std::array<std::string_view, 11> kPureTextTags = {
    "p", "h1", "h2", "h3", "h4", "h5", "h6", "span", "li", "td", "label",
};

}  // namespace

ElementKind classify_tag(std::string_view tag) {
  if (std::find(kInteractiveTags.begin(), kInteractiveTags.end(), tag) != kInteractiveTags.end()) {
    return ElementKind::kInteractive;
  }
  if (std::find(kPureTextTags.begin(), kPureTextTags.end(), tag) != kPureTextTags.end()) {
    return ElementKind::kPureText;
  }
  return ElementKind::kOther;
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

double text_similarity(std::string_view a, std::string_view b) {
  const std::u32string na = decode_utf8(normalize_text(a));
  const std::u32string nb = decode_utf8(normalize_text(b));
  const std::size_t longest = std::max(na.size(), nb.size());
  if (longest == 0) return 1.0;
  const std::size_t dist = edit_distance(na, nb);
  // Integer numerator keeps 7/10 bit-identical to the literal 0.7.
  return static_cast<double>(longest - dist) / static_cast<double>(longest);
}

bool is_textual(const ElementRecord& e, double threshold) {
  if (!e.ocr_text) return false;
  const std::string_view inner = e.attr(Attribute::kInnerText);
  if (normalize_text(inner).empty()) return false;
  return text_similarity(*e.ocr_text, inner) >= threshold;
}

ElementClass classify(const ElementRecord& e, double threshold) {
  ElementClass c;
  c.kind = classify_element(e);
  c.textual = c.kind == ElementKind::kInteractive && is_textual(e, threshold);
  return c;
}

std::set<std::string> dedup_ambiguous(std::span<const ElementRecord> elements) {
  std::map<std::string, std::vector<const ElementRecord*>> groups;
  for (const auto& e : elements) {
    groups[normalize_text(e.attr(Attribute::kInnerText))].push_back(&e);
  }
  std::set<std::string> excluded;
  for (const auto& [text, members] : groups) {
    if (members.size() < 2) continue;
    for (const auto* e : members) excluded.insert(e->id);
  }
  return excluded;
}

}  // namespace webground
