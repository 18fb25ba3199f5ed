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

#include "webground/referring_expression.h"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "webground/errors.h"
#include "webground/text.h"

namespace webground {
namespace {

constexpr std::array<std::string_view, 5> kReTypeNames = {
    "visual", "functional", "absolute_positional", "relative_positional", "contextual",
};

constexpr std::array<std::string_view, 9> kSourceNames = {
    "inner_text",  "alt",   "title",            "aria_label", "aria_describedby",
    "placeholder", "value", "mllm_description", "annotation",
};

void check_probability(double p, const char* field) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(field, "probability outside [0, 1]");
}

}  // namespace

std::string_view re_type_name(ReType t) { return kReTypeNames[static_cast<std::size_t>(t)]; }

std::optional<ReType> re_type_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kReTypeNames.size(); ++i) {
    if (kReTypeNames[i] == name) return static_cast<ReType>(i);
  }
  return std::nullopt;
}

std::vector<ReType> ReTypeSet::values() const {
  std::vector<ReType> out;
  for (ReType t : kAllReTypes) {
    if (contains(t)) out.push_back(t);
  }
  return out;
}

std::string_view descriptor_source_name(DescriptorSource s) {
  return kSourceNames[static_cast<std::size_t>(s)];
}

std::optional<DescriptorSource> descriptor_source_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSourceNames.size(); ++i) {
    if (kSourceNames[i] == name) return static_cast<DescriptorSource>(i);
  }
  return std::nullopt;
}

DescriptorSource descriptor_source_for(Attribute a) {
  // Attribute and DescriptorSource share their first seven enumerators.
  return static_cast<DescriptorSource>(static_cast<int>(a));
}

ReTypeSet descriptor_types(DescriptorSource s) {
  switch (s) {
    case DescriptorSource::kInnerText:
    case DescriptorSource::kAlt:
    case DescriptorSource::kPlaceholder:
    case DescriptorSource::kValue:
      return {ReType::kVisual};
    case DescriptorSource::kTitle:
    case DescriptorSource::kAriaLabel:
    case DescriptorSource::kAriaDescribedby:
    case DescriptorSource::kAnnotation:
      return {ReType::kFunctional};
    case DescriptorSource::kMllmDescription:
      return {ReType::kVisual, ReType::kFunctional};
  }
  return {};
}

void SynthesisPolicy::validate() const {
  check_probability(p_absolute, "p_absolute");
  check_probability(p_next_to, "p_next_to");
  check_probability(p_between, "p_between");
  double total = 0.0;
  for (double w : rel_weights) {
    if (!(w >= 0.0)) throw ValidationError("rel_weights", "negative weight");
    total += w;
  }
  if (total <= 0.0) throw ValidationError("rel_weights", "weights sum to zero");
}

SynthesisPolicy parse_policy(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed policy JSON: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ValidationError("$", "expected object");
  SynthesisPolicy p;
  try {
    if (doc.contains("p_absolute")) p.p_absolute = doc.at("p_absolute").get<double>();
    if (doc.contains("p_next_to")) p.p_next_to = doc.at("p_next_to").get<double>();
    if (doc.contains("p_between")) p.p_between = doc.at("p_between").get<double>();
    if (doc.contains("seed")) p.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("rel_weights")) {
      const auto& w = doc.at("rel_weights");
      if (!w.is_array() || w.size() != 3) {
        throw ValidationError("rel_weights", "expected three weights for 0, 1, 2 clauses");
      }
      for (std::size_t i = 0; i < 3; ++i) p.rel_weights[i] = w[i].get<double>();
    }
  } catch (const nlohmann::json::type_error& e) {
    throw ValidationError("$", e.what());
  }
  p.validate();
  return p;
}

std::string serialize_policy(const SynthesisPolicy& p) {
  nlohmann::ordered_json doc;
  doc["p_absolute"] = p.p_absolute;
  doc["rel_weights"] = p.rel_weights;
  doc["p_next_to"] = p.p_next_to;
  doc["p_between"] = p.p_between;
  doc["seed"] = p.seed;
  return doc.dump(2);
}

std::optional<Descriptor> choose_primary_descriptor(const ElementRecord& e, bool textual,
                                                    const std::optional<std::string>& mllm_desc,
                                                    Rng& rng) {
  if (textual) {
    std::string text = collapse_whitespace(e.attr(Attribute::kInnerText));
    if (!text.empty()) return Descriptor{std::move(text), DescriptorSource::kInnerText};
  }
  std::vector<Descriptor> candidates;
  for (Attribute a : kSalientAttributes) {
    std::string text = collapse_whitespace(e.attr(a));
    if (!text.empty()) candidates.push_back({std::move(text), descriptor_source_for(a)});
  }
  if (mllm_desc) {
    std::string text = collapse_whitespace(*mllm_desc);
    if (!text.empty()) candidates.push_back({std::move(text), DescriptorSource::kMllmDescription});
  }
  if (candidates.empty()) return std::nullopt;
  return std::move(candidates[rng.uniform_index(candidates.size())]);
}

ReType clause_type(RelationKind k) {
  switch (k) {
    case RelationKind::kUnderTitle:
    case RelationKind::kLabeledBy:
      return ReType::kContextual;
    default:
      return ReType::kRelativePositional;
  }
}

std::string positional_phrase(const Relation& r, std::string_view other, Rng& rng,
                              double p_next_to, std::string_view second_other) {
  const std::string obj(other);
  switch (r.kind) {
    case RelationKind::kLeftOf:
    case RelationKind::kRightOf:
      if (p_next_to > 0.0 && rng.bernoulli(p_next_to)) return "next to " + obj;
      return r.kind == RelationKind::kLeftOf ? "to the left of " + obj : "to the right of " + obj;
    case RelationKind::kAbove:
      return "above " + obj;
    case RelationKind::kBelow:
      return "below " + obj;
    case RelationKind::kNextTo:
      return "next to " + obj;
    case RelationKind::kBetween:
      return "between " + obj + " and " + std::string(second_other);
    case RelationKind::kUnderTitle:
      return "under the section " + obj;
    case RelationKind::kLabeledBy:
      return "labeled " + obj;
  }
  return obj;
}

std::string contextual_phrase(const ElementRecord& control, std::string_view label) {
  const std::string l(label);
  if (control.tag == "input" && control.input_type == "radio") return "radio button for " + l;
  if (control.tag == "input" && control.input_type == "checkbox") return "checkbox for " + l;
  if (control.tag == "select") return "the dropdown labeled " + l;
  if (control.tag == "textarea") return "the text area labeled " + l;
  return "the input field labeled " + l;
}

std::string absolute_phrase(Region r) {
  return "at the " + std::string(region_label(r)) + " of the page";
}

std::vector<Clause> choose_relative_clauses(std::span<const RelationCandidate> pool,
                                            std::size_t max_clauses,
                                            const SynthesisPolicy& policy, Rng& rng) {
  std::size_t count = rng.weighted_index(policy.rel_weights);
  count = std::min({count, max_clauses, pool.size()});
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // Partial Fisher-Yates: the first `count` slots are a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.uniform_index(order.size() - i);
    std::swap(order[i], order[j]);
  }
  std::vector<Clause> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const RelationCandidate& c = pool[order[i]];
    Relation r = c.relation;
    const bool directional = r.kind == RelationKind::kLeftOf || r.kind == RelationKind::kRightOf ||
                             r.kind == RelationKind::kAbove || r.kind == RelationKind::kBelow;
    if (directional && c.opposite_id && policy.p_between > 0.0 && rng.bernoulli(policy.p_between)) {
      r.kind = RelationKind::kBetween;
      r.second_object_id = c.opposite_id;
    }
    out.push_back({positional_phrase(r, c.object_text, rng, policy.p_next_to, c.opposite_text),
                   clause_type(r.kind)});
  }
  return out;
}

ReferringExpression assemble_re(const Descriptor& descriptor, std::optional<Region> absolute,
                                std::span<const Clause> relative,
                                const std::optional<Clause>& label_clause,
                                const SynthesisPolicy& policy, Rng& rng) {
  if (relative.size() > kMaxRelativeClauses) {
    throw std::invalid_argument("at most two relative clauses");
  }
  ReferringExpression re;
  re.descriptor = descriptor.text;
  re.descriptor_source = descriptor.source;
  re.re_types = descriptor_types(descriptor.source);

  std::vector<std::string> parts;
  std::size_t budget = kMaxRelativeClauses;
  if (label_clause) {
    // The label clause already names the control; a descriptor equal to the
    // label would only repeat it.
    const bool redundant =
        label_clause->text.ends_with(descriptor.text) &&
        label_clause->text.size() > descriptor.text.size() &&
        label_clause->text[label_clause->text.size() - descriptor.text.size() - 1] == ' ';
    if (!redundant) parts.push_back(descriptor.text);
    parts.push_back(label_clause->text);
    re.re_types.insert(label_clause->type);
    --budget;
  } else {
    parts.push_back(descriptor.text);
  }
  for (std::size_t i = 0; i < relative.size() && i < budget; ++i) {
    parts.push_back(relative[i].text);
    re.re_types.insert(relative[i].type);
  }
  if (absolute && policy.p_absolute > 0.0 && rng.bernoulli(policy.p_absolute)) {
    parts.push_back(absolute_phrase(*absolute));
    re.re_types.insert(ReType::kAbsolutePositional);
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) re.text += ", ";
    re.text += parts[i];
  }
  return re;
}

}  // namespace webground
