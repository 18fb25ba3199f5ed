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

#ifndef WEBGROUND_REFERRING_EXPRESSION_H_
#define WEBGROUND_REFERRING_EXPRESSION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "webground/random.h"
#include "webground/snapshot.h"
#include "webground/spatial.h"

namespace webground {

enum class ReType {
  kVisual,
  kFunctional,
  kAbsolutePositional,
  kRelativePositional,
  kContextual,
};

inline constexpr std::array<ReType, 5> kAllReTypes = {
    ReType::kVisual, ReType::kFunctional, ReType::kAbsolutePositional,
    ReType::kRelativePositional, ReType::kContextual};

std::string_view re_type_name(ReType t);
std::optional<ReType> re_type_from_name(std::string_view name);

class ReTypeSet {
 public:
  ReTypeSet() = default;
  ReTypeSet(std::initializer_list<ReType> types) {
    for (ReType t : types) insert(t);
  }

  void insert(ReType t) { bits_ |= bit(t); }
  void insert(ReTypeSet other) { bits_ |= other.bits_; }
  bool contains(ReType t) const { return (bits_ & bit(t)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::vector<ReType> values() const;

  friend bool operator==(const ReTypeSet&, const ReTypeSet&) = default;

 private:
  static std::uint8_t bit(ReType t) { return static_cast<std::uint8_t>(1u << static_cast<int>(t)); }
  std::uint8_t bits_ = 0;
};

// Where the primary descriptor came from. `kAnnotation` marks human or
// dataset-provided expressions brought in by the source adapters.
enum class DescriptorSource {
  kInnerText,
  kAlt,
  kTitle,
  kAriaLabel,
  kAriaDescribedby,
  kPlaceholder,
  kValue,
  kMllmDescription,
  kAnnotation,
};

std::string_view descriptor_source_name(DescriptorSource s);
std::optional<DescriptorSource> descriptor_source_from_name(std::string_view name);
DescriptorSource descriptor_source_for(Attribute a);

// RE types a descriptor contributes on its own. Visible text (inner text,
// alt, placeholder, value) is visual; title and aria-* are functional; MLLM
// descriptions are both.
ReTypeSet descriptor_types(DescriptorSource s);

struct Descriptor {
  std::string text;
  DescriptorSource source = DescriptorSource::kInnerText;
};

struct ReferringExpression {
  std::string text;
  std::string descriptor;  // the primary descriptor inside `text`
  ReTypeSet re_types;
  DescriptorSource descriptor_source = DescriptorSource::kInnerText;
};

// Randomization knobs. The defaults are the uncalibrated stand-ins;
// calibrated values are loaded from a policy file.
struct SynthesisPolicy {
  double p_absolute = 0.05;
  // Weights for drawing 0, 1 or 2 relative clauses.
  std::array<double, 3> rel_weights = {1.0, 1.0, 1.0};
  // Chance that a left/right relation is rendered as "next to".
  double p_next_to = 0.1;
  // Chance that a directional relation with a neighbor on the opposite side
  // becomes "between A and B".
  double p_between = 0.1;
  std::uint64_t seed = 0;

  // Throws ValidationError on out-of-range values.
  void validate() const;
};

// JSON with optional keys p_absolute, rel_weights, p_next_to, p_between,
// seed. Missing keys keep their defaults.
SynthesisPolicy parse_policy(std::string_view json_text);
std::string serialize_policy(const SynthesisPolicy& p);

// Textual elements always describe themselves by inner text. Otherwise one
// candidate is drawn uniformly from the non-empty salient attributes plus the
// MLLM description. Returns nothing when there is no candidate.
std::optional<Descriptor> choose_primary_descriptor(const ElementRecord& e, bool textual,
                                                    const std::optional<std::string>& mllm_desc,
                                                    Rng& rng);

struct Clause {
  std::string text;
  ReType type = ReType::kRelativePositional;
};

ReType clause_type(RelationKind k);

// Renders a relation as a prepositional phrase. Left/right relations turn
// into "next to" with probability `p_next_to`. `second_other` is only read
// for kBetween.
std::string positional_phrase(const Relation& r, std::string_view other, Rng& rng,
                              double p_next_to = 0.0, std::string_view second_other = {});

// "radio button for X", "checkbox for X", "the input field labeled X", ...
std::string contextual_phrase(const ElementRecord& control, std::string_view label);

// "at the top-left corner of the page"
std::string absolute_phrase(Region r);

// A relation the target could be described by, with its anchors' names.
struct RelationCandidate {
  Relation relation;
  std::string object_text;
  // Anchor on the opposite side, enabling the "between" variant.
  std::optional<std::string> opposite_id;
  std::string opposite_text;
};

// Draws the clause count from policy.rel_weights (capped by `max_clauses` and
// the pool size), samples that many distinct candidates and renders them.
std::vector<Clause> choose_relative_clauses(std::span<const RelationCandidate> pool,
                                            std::size_t max_clauses,
                                            const SynthesisPolicy& policy, Rng& rng);

inline constexpr std::size_t kMaxRelativeClauses = 2;

// Joins descriptor, the mandatory label clause (if any), up to two relative
// clauses and, with probability p_absolute, the absolute phrase. The label
// clause counts against the two-clause budget. Throws std::invalid_argument
// when more than two relative clauses are passed.
ReferringExpression assemble_re(const Descriptor& descriptor, std::optional<Region> absolute,
                                std::span<const Clause> relative,
                                const std::optional<Clause>& label_clause,
                                const SynthesisPolicy& policy, Rng& rng);

}  // namespace webground

#endif  // WEBGROUND_REFERRING_EXPRESSION_H_
