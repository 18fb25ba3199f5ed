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

#ifndef WEBGROUND_PROMPTS_H_
#define WEBGROUND_PROMPTS_H_

#include <string>
#include <string_view>

namespace webground::prompts {

// Templates that take input have exactly one "{}" slot.
inline constexpr std::string_view kSlot = "{}";

// Element crop + salient attributes -> free-form visual description.
extern const std::string_view kDescribeElement;
// Long description -> short referring expression.
extern const std::string_view kCondenseDescription;
// Marker-annotated screenshot -> {"visible", "description"}.
extern const std::string_view kDirectFree;
// Marker-annotated screenshot -> {"visible", "action"}.
extern const std::string_view kDirectFunctional;
// Planner prompt asking for a target-element description from a task.
extern const std::string_view kPlannerElementDescription;

// Replaces the single slot in `tmpl` with `value`.
std::string fill(std::string_view tmpl, std::string_view value);

}  // namespace webground::prompts

#endif  // WEBGROUND_PROMPTS_H_
