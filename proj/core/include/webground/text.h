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

#ifndef WEBGROUND_TEXT_H_
#define WEBGROUND_TEXT_H_

#include <string>
#include <string_view>

namespace webground {

// Trims, collapses internal whitespace runs to one space, and lowercases
// ASCII letters. Non-ASCII bytes pass through untouched.
std::string normalize_text(std::string_view s);

// Trim + collapse without case folding.
std::string collapse_whitespace(std::string_view s);

// Decodes UTF-8 into code points. Invalid sequences decode to U+FFFD, one
// per offending byte.
std::u32string decode_utf8(std::string_view s);

// First `n` whitespace-separated words of `s`, joined by single spaces.
std::string first_words(std::string_view s, std::size_t n);

}  // namespace webground

#endif  // WEBGROUND_TEXT_H_
