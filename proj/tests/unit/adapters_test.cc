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

#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "fixtures.h"
#include "webground/adapters.h"
#include "webground/errors.h"

namespace webground {
namespace {

const std::filesystem::path kProfiles = std::filesystem::path(WEBGROUND_CONFIG_DIR) / "profiles";
const std::filesystem::path kSources = std::filesystem::path(WEBGROUND_FIXTURE_DIR) / "sources";

SourceSpec spec_for(SourceName name, const std::string& file) {
  const std::string n(source_name(name));
  return {name, kSources / file, load_profile(kProfiles / (n + ".json"))};
}

struct Collected {
  AdaptCounts counts;
  std::vector<ScreenshotRecord> records;
};

Collected run(const SourceSpec& spec, std::uint64_t seed = 0) {
  Collected c;
  c.counts = adapt_source(spec, seed, [&](const ScreenshotRecord& r) { c.records.push_back(r); });
  return c;
}

TEST(Profiles, AllShippedProfilesParse) {
  for (const char* n : {"guiact", "androidcontrol", "widget_caption", "uibert", "aitz", "web_direct"}) {
    const SourceProfile p = load_profile(kProfiles / (std::string(n) + ".json"));
    EXPECT_EQ(source_name(p.source), n);
  }
}

TEST(Profiles, Validation) {
  EXPECT_THROW(parse_profile("{"), ParseError);
  EXPECT_THROW(parse_profile(R"({"fields": {}})"), ValidationError);
  EXPECT_THROW(parse_profile(R"({"source": "rico"})"), ValidationError);
  EXPECT_THROW(parse_profile(R"({"source": "uibert", "format": "csv"})"), ValidationError);
  EXPECT_THROW(parse_profile(R"({"source": "uibert", "fields": {"bbox": "box"}})"), ValidationError);
  EXPECT_THROW(parse_profile(R"({"source": "uibert", "bbox_format": "ltrb"})"), ValidationError);
  EXPECT_THROW(load_profile(kProfiles / "nope.json"), DataError);
}

TEST(MultiStep, ThenAsAWord) {
  EXPECT_TRUE(looks_multi_step("Open settings then tap Wi-Fi"));
  EXPECT_TRUE(looks_multi_step("Open settings, Then tap"));
  EXPECT_FALSE(looks_multi_step("Open the authentication page"));
  EXPECT_FALSE(looks_multi_step("thence"));
}

TEST(Adapt, GuiAct) {
  const Collected c = run(spec_for(SourceName::kGuiAct, "guiact.jsonl"));
  EXPECT_EQ(c.counts.records_in, 5u);
  EXPECT_EQ(c.counts.multi_step, 2u);
  EXPECT_EQ(c.counts.no_coordinates, 1u);
  EXPECT_EQ(c.counts.samples, 3u);
  ASSERT_EQ(c.records.size(), 2u);
  const auto& first = c.records[0].samples;
  ASSERT_EQ(first.size(), 2u);
  EXPECT_EQ(first[0].element_id, "g1#0");
  EXPECT_EQ(first[0].re.text, "the search button");
  EXPECT_EQ(first[1].re.text, "Search for flights");
  EXPECT_EQ(first[0].tag, "button");
  EXPECT_EQ(first[0].bbox, (BBox{100, 80, 100, 40}));
  EXPECT_EQ(first[0].re.descriptor_source, DescriptorSource::kAnnotation);
  EXPECT_EQ(c.records[1].samples[0].bbox, (BBox{700, 80, 100, 80}));
  EXPECT_EQ(c.records[1].screenshot_ref, "shots/g-2.png");
}

TEST(Adapt, AndroidControl) {
  const Collected c = run(spec_for(SourceName::kAndroidControl, "androidcontrol.jsonl"));
  EXPECT_EQ(c.counts.records_in, 4u);
  EXPECT_EQ(c.counts.unmappable, 2u);
  ASSERT_EQ(c.records.size(), 1u);
  ASSERT_EQ(c.records[0].samples.size(), 2u);
  EXPECT_EQ(c.records[0].samples[1].bbox, (BBox{10, 100, 290, 40}));
  EXPECT_EQ(c.records[0].samples[1].target, (Point{155, 120}));
}

TEST(Adapt, WidgetCaptionPicksTwoCaptionsDeterministically) {
  const SourceSpec spec = spec_for(SourceName::kWidgetCaption, "widget_caption.json");
  const Collected c = run(spec, 7);
  EXPECT_EQ(c.counts.unmappable, 1u);
  ASSERT_EQ(c.records.size(), 1u);
  const auto& s = c.records[0].samples;
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].element_id, "w1#0");
  EXPECT_EQ(s[1].element_id, "w1#1");
  EXPECT_NE(s[0].re.text, s[1].re.text);
  EXPECT_EQ(s[2].re.text, "share icon");
  const Collected again = run(spec, 7);
  EXPECT_EQ(serialize_record(again.records[0]), serialize_record(c.records[0]));
  bool varies = false;
  for (std::uint64_t seed = 0; seed < 20 && !varies; ++seed) {
    varies = serialize_record(run(spec, seed).records[0]) != serialize_record(c.records[0]);
  }
  EXPECT_TRUE(varies);
}

TEST(Adapt, UiBertNormalizedBoxes) {
  const Collected c = run(spec_for(SourceName::kUiBert, "uibert.jsonl"));
  EXPECT_EQ(c.counts.unmappable, 1u);
  ASSERT_EQ(c.records.size(), 1u);
  EXPECT_EQ(c.records[0].samples[0].bbox, (BBox{108, 384, 324, 96}));
}

TEST(Adapt, AitzPointBecomesUnitBox) {
  const Collected c = run(spec_for(SourceName::kAitz, "aitz.jsonl"));
  EXPECT_EQ(c.counts.no_coordinates, 1u);
  ASSERT_EQ(c.records.size(), 1u);
  const auto& s = c.records[0].samples[0];
  EXPECT_EQ(s.bbox, (BBox{540, 600, 1, 1}));
  EXPECT_EQ(s.target, (Point{540, 600}));
  EXPECT_EQ(s.re.text, "I need to open the menu to find settings.");
}

TEST(Adapt, WebDirectDropsInvisible) {
  const Collected c = run(spec_for(SourceName::kWebDirect, "web_direct.jsonl"));
  EXPECT_EQ(c.counts.not_visible, 1u);
  ASSERT_EQ(c.records.size(), 1u);
  EXPECT_EQ(c.records[0].samples[0].re.descriptor_source, DescriptorSource::kMllmDescription);
  EXPECT_EQ(c.counts.dropped() + c.counts.records_emitted, c.counts.records_in);
}

TEST(Adapt, Errors) {
  SourceSpec spec = spec_for(SourceName::kUiBert, "uibert.jsonl");
  spec.name = SourceName::kAitz;
  EXPECT_THROW(run(spec), DataError);
  spec = spec_for(SourceName::kUiBert, "missing.jsonl");
  EXPECT_THROW(run(spec), DataError);
  spec = spec_for(SourceName::kWidgetCaption, "widget_caption.json");
  spec.profile.records = "/nothing";
  EXPECT_THROW(run(spec), DataError);
}

TEST(Adapt, ToFileWritesJsonl) {
  fixture::TempDir dir("adapt");
  const AdaptCounts counts =
      adapt_to_file(spec_for(SourceName::kGuiAct, "guiact.jsonl"), 0, dir / "out.jsonl");
  EXPECT_EQ(counts.samples, 3u);
  std::size_t samples = 0;
  for_each_record(dir / "out.jsonl", [&](const ScreenshotRecord& r) { samples += r.samples.size(); });
  EXPECT_EQ(samples, 3u);
}

}  // namespace
}  // namespace webground
