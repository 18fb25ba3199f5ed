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

#include "fixtures.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string_view>

#include <unistd.h>

#include "webground/random.h"

namespace webground::fixture {
namespace {

constexpr std::array<std::string_view, 48> kWords = {
    "account", "archive", "billing", "blog",    "cart",     "checkout", "contact", "create",
    "delete",  "details", "docs",    "download", "edit",    "events",   "explore", "faq",
    "filter",  "forum",   "gallery", "guide",   "help",     "history",  "home",    "jobs",
    "latest",  "login",   "map",     "members", "news",     "orders",   "pricing", "privacy",
    "profile", "reports", "reviews", "rss",     "sale",     "search",   "security", "settings",
    "share",   "shop",    "sign",    "store",   "support",  "terms",    "travel",  "videos"};

constexpr std::array<std::string_view, 4> kCommonLabels = {"Next", "Read more", "Home", "Share"};

class PageBuilder {
 public:
  PageBuilder(Rng& rng, const PageParams& params, int width)
      : rng_(rng), params_(params), width_(width) {}

  int range(int lo, int hi) { return lo + static_cast<int>(rng_.uniform_index(hi - lo + 1)); }
  bool chance(double p) { return rng_.bernoulli(p); }

  std::string word() { return std::string(kWords[rng_.uniform_index(kWords.size())]); }

  std::string phrase(int max_words) {
    if (chance(params_.p_duplicate_text)) {
      return std::string(kCommonLabels[rng_.uniform_index(kCommonLabels.size())]);
    }
    std::string out = word();
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
    for (int n = range(1, max_words); n > 1; --n) out += " " + word();
    return out;
  }

  // OCR output for text rendered inside an element.
  std::optional<std::string> ocr_of(const std::string& text) {
    const double r = rng_.uniform01();
    if (r < 0.62) return text;
    if (r < 0.74) {
      std::string t = text;
      t[rng_.uniform_index(t.size())] = 'x';
      return t;
    }
    if (r < 0.88) return word() + " " + word();
    return std::nullopt;
  }

  ElementRecord& add(std::string tag, BBox box) {
    box.w = std::max(1, std::min(box.w, width_ - box.x));
    ElementRecord e;
    e.id = "e" + std::to_string(elements.size());
    e.tag = std::move(tag);
    e.bbox = box;
    e.visible = !chance(params_.p_invisible);
    elements.push_back(std::move(e));
    return elements.back();
  }

  ElementRecord& add_text_element(std::string tag, BBox box, std::string text, bool ocr) {
    ElementRecord& e = add(std::move(tag), box);
    if (ocr) e.ocr_text = ocr_of(text);
    e.attributes[Attribute::kInnerText] = std::move(text);
    return e;
  }

  int nav_row(int y) {
    const int h = range(20, 32);
    int x = range(10, 40);
    for (int n = range(3, 7); n > 0; --n) {
      const int w = range(50, 160);
      if (x + w > width_ - 10) break;
      ElementRecord& a = add_text_element("a", {x, y, w, h}, phrase(2), true);
      if (chance(0.2)) a.attributes[Attribute::kTitle] = phrase(3);
      if (chance(0.1)) a.attributes[Attribute::kAriaLabel] = phrase(2);
      x += w + range(8, 40);
    }
    return h;
  }

  int heading_row(int y) {
    static constexpr std::array<std::string_view, 3> kTags = {"h1", "h2", "h3"};
    const int h = range(26, 44);
    add_text_element(std::string(kTags[rng_.uniform_index(3)]), {range(10, 60), y, range(180, 600), h},
                     phrase(3), false);
    return h;
  }

  int form_row(int y) {
    const int h = range(22, 34);
    const int kind = static_cast<int>(rng_.uniform_index(5));
    int x = range(10, 60);
    if (kind == 0 || kind == 1) {
      // Radio or checkbox followed by its label.
      ElementRecord& box = add("input", {x, y + (h - 16) / 2, 16, 16});
      box.input_type = kind == 0 ? "radio" : "checkbox";
      if (chance(0.15)) box.attributes[Attribute::kAriaLabel] = phrase(2);
      add_text_element(chance(0.5) ? "label" : "span", {x + 24, y, range(60, 200), h}, phrase(2),
                       false);
      return h;
    }
    const int label_w = range(70, 160);
    if (chance(0.85)) add_text_element("label", {x, y, label_w, h}, phrase(2), false);
    x += label_w + range(8, 20);
    if (kind == 2) {
      ElementRecord& in = add("input", {x, y, range(150, 400), h});
      static constexpr std::array<std::string_view, 5> kTypes = {"text", "email", "search",
                                                                 "password", ""};
      in.input_type = std::string(kTypes[rng_.uniform_index(kTypes.size())]);
      if (chance(0.3)) in.attributes[Attribute::kPlaceholder] = phrase(2);
      if (chance(0.1)) in.attributes[Attribute::kAriaLabel] = phrase(2);
      if (chance(0.05)) in.attributes[Attribute::kValue] = word();
    } else if (kind == 3) {
      ElementRecord& sel = add("select", {x, y, range(100, 260), h});
      if (chance(0.3)) sel.attributes[Attribute::kValue] = word();
      if (chance(0.1)) sel.attributes[Attribute::kAriaDescribedby] = phrase(3);
    } else {
      const int th = range(60, 140);
      ElementRecord& ta = add("textarea", {x, y, range(200, 500), th});
      if (chance(0.4)) ta.attributes[Attribute::kPlaceholder] = phrase(3);
      return th;
    }
    return h;
  }

  int media_row(int y) {
    int x = range(10, 40);
    int row_h = 24;
    for (int n = range(1, 4); n > 0; --n) {
      const int kind = static_cast<int>(rng_.uniform_index(10));
      if (kind < 5) {
        const int w = range(60, 300);
        const int h = range(50, 200);
        if (x + w > width_ - 10) break;
        ElementRecord& img = add("img", {x, y, w, h});
        if (chance(0.6)) img.attributes[Attribute::kAlt] = phrase(3);
        if (chance(0.15)) img.attributes[Attribute::kTitle] = phrase(2);
        x += w + range(10, 40);
        row_h = std::max(row_h, h);
      } else if (kind < 7) {
        if (x + 24 > width_ - 10) break;
        ElementRecord& svg = add("svg", {x, y, 24, 24});
        if (chance(0.5)) svg.attributes[Attribute::kAriaLabel] = phrase(2);
        if (chance(0.2)) svg.attributes[Attribute::kTitle] = phrase(2);
        x += 24 + range(10, 30);
      } else {
        const int w = range(60, 160);
        const int h = range(24, 40);
        if (x + w > width_ - 10) break;
        if (chance(0.7)) {
          ElementRecord& b = add_text_element("button", {x, y, w, h}, phrase(2), true);
          if (chance(0.15)) b.attributes[Attribute::kAriaLabel] = phrase(2);
        } else {
          ElementRecord& b = add("button", {x, y, w, h});
          b.attributes[Attribute::kAriaLabel] = phrase(2);
        }
        x += w + range(10, 40);
        row_h = std::max(row_h, h);
      }
    }
    return row_h;
  }

  int paragraph_row(int y) {
    const int w = range(300, std::min(900, width_ - 40));
    const int h = range(40, 120);
    const int x = range(10, 30);
    add_text_element("p", {x, y, w, h}, phrase(3) + " " + phrase(3) + ".", false);
    if (chance(0.4)) {
      add_text_element("a", {x + range(10, w / 2), y + h - 22, range(40, 120), 18}, phrase(2), true);
    }
    return h;
  }

  int video_row(int y) {
    const int w = range(320, 640);
    const int h = w * 9 / 16;
    ElementRecord& v = add("video", {range(10, 60), y, w, h});
    if (chance(0.5)) v.attributes[Attribute::kTitle] = phrase(3);
    return h;
  }

  std::vector<ElementRecord> elements;

 private:
  Rng& rng_;
  const PageParams& params_;
  int width_;
};

}  // namespace

PageSnapshot random_page(std::uint64_t seed, const std::string& id, const PageParams& params) {
  Rng rng = derive_rng(seed, {"page", id});
  static constexpr std::array<int, 4> kWidths = {1280, 1280, 1440, 1024};
  const int width = kWidths[rng.uniform_index(kWidths.size())];
  PageBuilder b(rng, params, width);
  const std::size_t target =
      static_cast<std::size_t>(b.range(params.min_elements, params.max_elements));
  static constexpr std::array<double, 6> kRowWeights = {0.36, 0.10, 0.22, 0.20, 0.10, 0.02};
  int y = b.range(8, 30);
  while (b.elements.size() < target && y < 7000) {
    int h = 0;
    switch (rng.weighted_index(kRowWeights)) {
      case 0:
        h = b.nav_row(y);
        break;
      case 1:
        h = b.heading_row(y);
        break;
      case 2:
        h = b.form_row(y);
        break;
      case 3:
        h = b.media_row(y);
        break;
      case 4:
        h = b.paragraph_row(y);
        break;
      default:
        h = b.video_row(y);
        break;
    }
    y += h + b.range(6, 40);
  }

  PageSnapshot s;
  s.snapshot_id = id;
  s.url = "https://example.test/" + id;
  s.viewport = {width, 1000};
  s.canvas = {width, std::max(1000, y + 20)};
  s.screenshot_ref = id + ".png";
  s.elements = std::move(b.elements);
  return s;
}

PageSnapshot random_scatter(std::uint64_t seed, const std::string& id, int max_elements) {
  Rng rng = derive_rng(seed, {"scatter", id});
  static constexpr std::array<std::string_view, 15> kTags = {
      "a", "button", "input", "input", "select", "textarea", "img", "svg",
      "h1", "h2", "h3", "p", "span", "label", "div"};
  static constexpr std::array<std::string_view, 5> kInputTypes = {"radio", "checkbox", "text",
                                                                  "email", "submit"};
  static constexpr std::array<std::string_view, 6> kTexts = {"Alpha", "Beta", "Gamma",
                                                             "Delta", "", "Beta"};
  constexpr int kSide = 800;
  PageSnapshot s;
  s.snapshot_id = id;
  s.viewport = {kSide, 600};
  s.canvas = {kSide, kSide};
  s.screenshot_ref = id + ".png";
  const int n = 1 + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(max_elements)));
  for (int i = 0; i < n; ++i) {
    ElementRecord e;
    e.id = "s" + std::to_string(i);
    e.tag = std::string(kTags[rng.uniform_index(kTags.size())]);
    if (e.tag == "input") e.input_type = std::string(kInputTypes[rng.uniform_index(5)]);
    // Coarse coordinates make touching edges and distance ties common.
    const bool coarse = rng.bernoulli(0.4);
    const int step = coarse ? 20 : 1;
    int x = static_cast<int>(rng.uniform_index(kSide / step)) * step;
    int y = static_cast<int>(rng.uniform_index(kSide / step)) * step;
    int w = std::max(1, static_cast<int>(1 + rng.uniform_index(160 / step)) * step);
    int h = std::max(1, static_cast<int>(1 + rng.uniform_index(100 / step)) * step);
    w = std::min(w, kSide - x);
    h = std::min(h, kSide - y);
    if (w <= 0 || h <= 0) {
      x = 0;
      y = 0;
      w = 10;
      h = 10;
    }
    e.bbox = {x, y, w, h};
    std::string text(kTexts[rng.uniform_index(kTexts.size())]);
    if (!text.empty()) e.attributes[Attribute::kInnerText] = text;
    if (rng.bernoulli(0.15)) e.attributes[Attribute::kAriaLabel] = "Aria " + std::to_string(i);
    if (rng.bernoulli(0.1)) e.attributes[Attribute::kTitle] = "Title " + std::to_string(i);
    e.visible = rng.bernoulli(0.9);
    s.elements.push_back(std::move(e));
  }
  return s;
}

std::vector<std::filesystem::path> write_corpus(const std::filesystem::path& dir,
                                                std::size_t count, std::uint64_t seed,
                                                const PageParams& params) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (std::size_t i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "page-%04zu", i);
    const PageSnapshot s = random_page(seed, name, params);
    const auto path = dir / (std::string(name) + ".json");
    write_file(path, serialize_snapshot(s) + "\n");
    out.push_back(path);
  }
  return out;
}

TempDir::TempDir(const std::string& tag) {
  const auto base = std::filesystem::temp_directory_path();
  for (std::uint64_t i = 0;; ++i) {
    auto candidate = base / ("webground-" + tag + "-" +
                             std::to_string(hash_keys(i, {tag, std::to_string(::getpid())}) % 1000000007));
    if (std::filesystem::create_directory(candidate)) {
      path_ = std::move(candidate);
      break;
    }
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& p, const std::string& body) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  os << body;
  if (!os) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace webground::fixture
