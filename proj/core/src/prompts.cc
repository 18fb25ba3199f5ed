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

#include "webground/prompts.h"

#include <stdexcept>

namespace webground::prompts {

const std::string_view kDescribeElement =
    "Based on the attached image of a web element, please provide a short description of the "
    "web element displayed. The goal is to capture the intuitive and visual appearance of the "
    "element. Use the accompanying HTML information as context but focus more on describing what "
    "is visually observable. Avoid directly referencing HTML attributes; instead, interpret their "
    "possible visual implications if they can be inferred from the image. Be cautious of "
    "potential inaccuracies in the HTML attributes and use them to enhance understanding only "
    "when they align reasonably with what can be inferred visually.\n"
    "\n"
    "HTML: {}";

const std::string_view kCondenseDescription =
    "Here is a description of an element in a webpage. Using the detailed description provided, "
    "create a concise phrase that captures the essential visual and functional characteristics "
    "of the web element. The rephrased description should be straightforward, simple and precise "
    "enough to allow humans quickly spot this element in a webpage screenshot. Focus on the most "
    "prominent visual features and any critical function indicated by the text.\n"
    "\n"
    "Description: {}\n"
    "\n"
    "Leave only your final description in the answer, without any explanation.";

// The direct prompts have no slot; the annotated screenshot is the input.
const std::string_view kDirectFree =
    "Here is supposed to be an interactive element (button, link, dropdown, text box, etc.) in "
    "the red box pointed by an arrow in the screenshot. Can you find it? Is it visible from the "
    "screenshot? Can you write a concise description that is sufficient for humans to locate it "
    "from the screenshot? Your response should be a JSON. For example, {\"visible\": true, "
    "\"description\": \"your description here\"}.";

const std::string_view kDirectFunctional =
    "Here is supposed to be an interactive element (button, link, dropdown, text box, etc.) in "
    "the red box pointed by an arrow in the screenshot. Can you find it? Is it visible from the "
    "screenshot? What unique function does this element enable? Your response should be a JSON. "
    "For example, {\"visible\": true, \"action\": \"subscribe the latest updates\"}.";

const std::string_view kPlannerElementDescription =
    "You are an excellent agent for mobile, web, and desktop navigation tasks.\n"
    "Describe the target element for this task based on the provided screenshot:\n"
    "Task: {}\n"
    "\n"
    "Provide a concise description of the element you want to operate.\n"
    "Ensure your description is both concise and complete, covering all the necessary "
    "information in less than 30 words, and organized into one sentence.\n"
    "If you find identical elements, specify their location and details to differentiate them "
    "from others.\n"
    "\n"
    "Your output should only include the element description itself and follow the "
    "requirements.\n"
    "Do not start with \"the target element\" or \"the element\".";

std::string fill(std::string_view tmpl, std::string_view value) {
  const auto pos = tmpl.rfind(kSlot);
  if (pos == std::string_view::npos) throw std::logic_error("template has no slot");
  std::string out;
  out.reserve(tmpl.size() + value.size());
  out.append(tmpl.substr(0, pos));
  out.append(value);
  out.append(tmpl.substr(pos + kSlot.size()));
  return out;
}

}  // namespace webground::prompts
