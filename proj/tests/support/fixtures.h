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

#ifndef WEBGROUND_TESTS_SUPPORT_FIXTURES_H_
#define WEBGROUND_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "webground/snapshot.h"

namespace webground::fixture {

// Knobs for generated web pages.
struct PageParams {
  int min_elements = 20;
  int max_elements = 60;
  double p_invisible = 0.04;
  double p_duplicate_text = 0.05;
};

// A plausible page: navigation rows, section titles, form rows with labels,
// media rows and paragraphs. Same seed and id give the same snapshot.
PageSnapshot random_page(std::uint64_t seed, const std::string& id, const PageParams& params = {});

// Up to `max_elements` boxes scattered anywhere on a small canvas, with a
// mix of tags (titles, labels, controls, media). Exercises spatial edge
// cases: touching and overlapping boxes, equal distances.
PageSnapshot random_scatter(std::uint64_t seed, const std::string& id, int max_elements = 25);

// Writes `count` random_page snapshots as page_NNNN.json and returns their
// paths in order.
std::vector<std::filesystem::path> write_corpus(const std::filesystem::path& dir,
                                                std::size_t count, std::uint64_t seed,
                                                const PageParams& params = {});

// Directory removed (recursively) on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& body);

}  // namespace webground::fixture

#endif  // WEBGROUND_TESTS_SUPPORT_FIXTURES_H_
