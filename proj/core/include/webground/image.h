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

#ifndef WEBGROUND_IMAGE_H_
#define WEBGROUND_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "webground/geometry.h"

namespace webground {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kMarkerRed{255, 0, 0};

// 8-bit RGB raster, row-major.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  // Writes only when (x, y) is inside the image.
  void set_clipped(int x, int y, Rgb c) {
    if (in_bounds(x, y)) set(x, y, c);
  }

  const std::vector<std::uint8_t>& data() const { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// PNG I/O through libpng. Alpha is dropped on read. Throws DataError.
Image read_png(const std::filesystem::path& path);
void write_png(const Image& img, const std::filesystem::path& path);

// Copy of the region `box`, which must lie inside the image.
Image crop(const Image& img, const BBox& box);

}  // namespace webground

#endif  // WEBGROUND_IMAGE_H_
