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

#ifndef WEBGROUND_ERRORS_H_
#define WEBGROUND_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace webground {

// Malformed input bytes. `offset` is the byte position reported by the parser.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Well-formed input that breaks the schema. `field` is a path such as
// "elements[3].bbox".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Bad data discovered while running a stage (unreadable file, mismatched
// source profile, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The augmentation service could not be reached or misbehaved.
class RemoteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace webground

#endif  // WEBGROUND_ERRORS_H_
