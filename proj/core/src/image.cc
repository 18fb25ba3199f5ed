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

#include "webground/image.h"

#include <png.h>

#include <cstring>
#include <stdexcept>

#include "webground/errors.h"

namespace webground {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw std::invalid_argument("negative image size");
  data_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

Rgb Image::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {data_[i], data_[i + 1], data_[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  data_[i] = c.r;
  data_[i + 1] = c.g;
  data_[i + 2] = c.b;
}

Image read_png(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw DataError("cannot read PNG " + path.string() + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  Image img(static_cast<int>(png.width), static_cast<int>(png.height));
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buf.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw DataError("cannot decode PNG " + path.string() + ": " + msg);
  }
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * img.width() + x) * 3;
      img.set(x, y, {buf[i], buf[i + 1], buf[i + 2]});
    }
  }
  return img;
}

void write_png(const Image& img, const std::filesystem::path& path) {
  if (img.empty()) throw DataError("refusing to write an empty image");
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width());
  png.height = static_cast<png_uint_32>(img.height());
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, img.data().data(), 0, nullptr)) {
    throw DataError("cannot write PNG " + path.string() + ": " + png.message);
  }
}

Image crop(const Image& img, const BBox& box) {
  if (box.x < 0 || box.y < 0 || box.w <= 0 || box.h <= 0 || box.right() > img.width() ||
      box.bottom() > img.height()) {
    throw std::invalid_argument("crop box outside image");
  }
  Image out(box.w, box.h);
  for (int y = 0; y < box.h; ++y) {
    for (int x = 0; x < box.w; ++x) out.set(x, y, img.at(box.x + x, box.y + y));
  }
  return out;
}

}  // namespace webground
