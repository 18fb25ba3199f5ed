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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fixtures.h"
#include "oracles.h"
#include "webground/errors.h"
#include "webground/pipeline.h"

namespace webground {
namespace {

ElementRecord el(std::string id, std::string tag, BBox b, std::string text = "",
                 bool ocr_matches = true) {
  ElementRecord e;
  e.id = std::move(id);
  e.tag = std::move(tag);
  e.bbox = b;
  if (!text.empty()) {
    e.attributes[Attribute::kInnerText] = text;
    if (ocr_matches) e.ocr_text = text;
  }
  return e;
}

PageSnapshot page(std::vector<ElementRecord> elements) {
  PageSnapshot p;
  p.snapshot_id = "page";
  p.url = "https://example.com/";
  p.viewport = {1280, 1000};
  p.canvas = {1280, 1000};
  p.screenshot_ref = "page.png";
  p.elements = std::move(elements);
  return p;
}

std::map<std::string, GroundingSample> by_id(const SnapshotResult& r) {
  std::map<std::string, GroundingSample> out;
  if (r.record) {
    for (const auto& s : r.record->samples) out.emplace(s.element_id, s);
  }
  return out;
}

TEST(Anchors, NamesAndLimits) {
  EXPECT_EQ(anchor_name(el("a", "span", {}, "  Price  list "), 60), "Price list");
  ElementRecord icon = el("b", "img", {});
  icon.attributes[Attribute::kAlt] = "Cart";
  EXPECT_EQ(anchor_name(icon, 60), "Cart");
  EXPECT_FALSE(anchor_name(el("c", "p", {}, std::string(61, 'x')), 60));
  EXPECT_FALSE(anchor_name(el("d", "div", {}), 60));
}

TEST(RelationPool, DirectionsTitlesAndExclusions) {
  const std::vector<ElementRecord> els = {
      el("t", "button", {400, 400, 80, 30}, "Go"),
      el("left", "span", {250, 405, 100, 20}, "Quantity"),
      el("right", "span", {520, 405, 100, 20}, "Total"),
      el("far", "span", {1200, 405, 50, 20}, "Far away"),
      el("h", "h2", {100, 100, 300, 40}, "Checkout"),
      el("dup", "span", {400, 480, 80, 20}, "Same"),
  };
  const auto pool = relation_pool(els[0], els, 500, 60, {"dup"});
  std::map<std::string, RelationCandidate> found;
  for (const auto& c : pool) found.emplace(c.relation.object_id, c);
  EXPECT_EQ(found.size(), 3u);
  EXPECT_EQ(found.at("left").relation.kind, RelationKind::kRightOf);
  EXPECT_EQ(found.at("left").opposite_text, "Total");
  EXPECT_EQ(found.at("right").relation.kind, RelationKind::kLeftOf);
  EXPECT_EQ(found.at("h").relation.kind, RelationKind::kUnderTitle);
  EXPECT_FALSE(found.contains("far"));
  EXPECT_FALSE(found.contains("dup"));
}

TEST(Snapshot, TargetsDescriptorsAndDrops) {
  ElementRecord hidden = el("hidden", "button", {10, 10, 50, 20}, "Hidden");
  hidden.visible = false;
  ElementRecord icon = el("icon", "img", {600, 20, 32, 32});
  icon.attributes[Attribute::kAlt] = "Shopping cart";
  ElementRecord email = el("email", "input", {300, 300, 200, 24});
  email.input_type = "email";
  ElementRecord bare = el("bare", "svg", {900, 900, 10, 10});
  const PageSnapshot p = page({
      el("sign", "a", {1100, 20, 80, 20}, "Sign in"),
      el("more1", "a", {100, 600, 60, 20}, "More"),
      el("more2", "a", {100, 700, 60, 20}, "more"),
      el("para", "p", {100, 800, 400, 40}, "Terms apply"),
      el("lbl", "label", {200, 302, 80, 20}, "Email"),
      el("noisy", "button", {700, 500, 90, 30}, "Subscribe", false),
      hidden, icon, email, bare,
  });
  SynthesisOptions opt;
  opt.policy.p_absolute = 0.0;
  opt.policy.rel_weights = {1.0, 0.0, 0.0};
  const SnapshotResult r = synthesize_snapshot(p, opt, nullptr);
  const auto s = by_id(r);
  EXPECT_EQ(r.drops.invisible, 1u);
  EXPECT_EQ(r.drops.ambiguous, 2u);
  EXPECT_EQ(r.drops.no_descriptor, 1u);
  EXPECT_EQ(r.candidates, 4u);
  ASSERT_EQ(s.size(), 4u);
  // OCR disagrees, so the inner text is only one candidate attribute.
  EXPECT_EQ(s.at("noisy").re.text, "Subscribe");
  EXPECT_EQ(s.at("sign").re.text, "Sign in");
  EXPECT_EQ(s.at("sign").re.descriptor_source, DescriptorSource::kInnerText);
  EXPECT_EQ(s.at("icon").re.text, "Shopping cart");
  EXPECT_EQ(s.at("icon").re.descriptor_source, DescriptorSource::kAlt);
  EXPECT_EQ(s.at("email").re.text, "the input field labeled Email");
  EXPECT_TRUE(s.at("email").re.re_types.contains(ReType::kContextual));
  EXPECT_FALSE(s.contains("para"));
  EXPECT_FALSE(s.contains("lbl"));
  EXPECT_EQ(r.record->samples.front().element_id, "sign");
}

TEST(Snapshot, MockClientAnnotatesNonTextualTargets) {
  ElementRecord noisy = el("noisy", "button", {700, 500, 90, 30}, "Subscribe", false);
  const PageSnapshot p = page({noisy, el("ok", "a", {10, 10, 40, 20}, "Home")});
  AugmentationConfig cfg;
  cfg.mock = true;
  AugmentationClient client(cfg);
  SynthesisOptions opt;
  opt.policy.p_absolute = 0.0;
  opt.policy.rel_weights = {1.0, 0.0, 0.0};
  bool saw_mllm = false;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    opt.policy.seed = seed;
    const SnapshotResult r = synthesize_snapshot(p, opt, &client);
    EXPECT_EQ(r.mllm_annotated, 1u);
    const auto s = by_id(r);
    ASSERT_TRUE(s.contains("noisy"));
    const auto& re = s.at("noisy").re;
    if (re.descriptor_source == DescriptorSource::kMllmDescription) {
      EXPECT_EQ(re.text, "mock-desc:noisy");
      saw_mllm = true;
    } else {
      EXPECT_EQ(re.descriptor_source, DescriptorSource::kInnerText);
    }
    EXPECT_EQ(s.at("ok").re.descriptor_source, DescriptorSource::kInnerText);
  }
  EXPECT_TRUE(saw_mllm);
  EXPECT_EQ(client.stats().requests, 40u);
}

TEST(Snapshot, FailedAugmentationFallsBackToAttributes) {
  ElementRecord noisy = el("noisy", "button", {700, 500, 90, 30}, "Subscribe", false);
  AugmentationClient offline(AugmentationConfig{});
  const SnapshotResult r = synthesize_snapshot(page({noisy}), SynthesisOptions{}, &offline);
  EXPECT_EQ(r.drops.augmentation_skipped, 1u);
  ASSERT_TRUE(r.record);
  EXPECT_EQ(r.record->samples[0].re.descriptor_source, DescriptorSource::kInnerText);
}

TEST(Snapshot, StructuralErrorsAreFatal) {
  PageSnapshot p = page({el("a", "a", {0, 0, 10, 10}, "x"), el("a", "a", {0, 20, 10, 10}, "y")});
  EXPECT_THROW(synthesize_snapshot(p, SynthesisOptions{}, nullptr), DataError);
  p = page({el("a", "a", {0, 0, 10, 10}, "x")});
  p.viewport.width = 100;
  EXPECT_THROW(synthesize_snapshot(p, SynthesisOptions{}, nullptr), DataError);
  p = page({el("a", "a", {0, 0, 10, 10}, "x"), el("b", "a", {0, 0, 0, 10}, "y")});
  const SnapshotResult r = synthesize_snapshot(p, SynthesisOptions{}, nullptr);
  EXPECT_EQ(r.drops.invalid_element, 1u);
}

TEST(Snapshot, ClosureOnRandomPages) {
  SynthesisOptions opt;
  opt.policy.rel_weights = {0.2, 0.4, 0.4};
  opt.policy.p_absolute = 0.2;
  fixture::PageParams params;
  params.max_elements = 250;
  for (int i = 0; i < 60; ++i) {
    const PageSnapshot p = fixture::random_page(500 + i, "p" + std::to_string(i), params);
    opt.policy.seed = i;
    const SnapshotResult r = synthesize_snapshot(p, opt, nullptr);
    const SnapshotResult again = synthesize_snapshot(p, opt, nullptr);
    ASSERT_EQ(r.record.has_value(), again.record.has_value());
    if (!r.record) continue;
    ASSERT_EQ(serialize_record(*r.record), serialize_record(*again.record));
    ASSERT_LE(r.record->samples.size(), kPageElementCap);
    std::map<std::string, const ElementRecord*> els;
    for (const auto& e : p.elements) els.emplace(e.id, &e);
    std::set<std::string> seen;
    for (const auto& s : r.record->samples) {
      ASSERT_TRUE(seen.insert(s.element_id).second);
      const ElementRecord& e = *els.at(s.element_id);
      ASSERT_TRUE(e.visible);
      ASSERT_EQ(classify_tag(e.tag), ElementKind::kInteractive);
      ASSERT_EQ(s.bbox, e.bbox);
      ASSERT_EQ(s.target, center_point(e.bbox));
      ASSERT_TRUE(contains_inclusive(e.bbox, s.target));
      ASSERT_NE(s.re.text.find(s.re.descriptor), std::string::npos);
      ASSERT_FALSE(s.re.re_types.empty());
    }
  }
}

TEST(Corpus, JobsAndDownsampling) {
  fixture::TempDir dir("corpus");
  fixture::write_corpus(dir / "snaps", 40, 3);
  const auto files = list_snapshot_files(dir / "snaps");
  ASSERT_EQ(files.size(), 40u);
  SynthesisOptions opt;
  opt.policy.seed = 7;
  opt.jobs = 1;
  const CorpusReport one = synthesize_corpus(files, dir / "one.jsonl", opt, nullptr);
  opt.jobs = 4;
  std::size_t progress_calls = 0;
  const CorpusReport four = synthesize_corpus(files, dir / "four.jsonl", opt, nullptr,
                                              [&](std::size_t, std::size_t) { ++progress_calls; });
  EXPECT_GT(progress_calls, 0u);
  EXPECT_EQ(fixture::read_file(dir / "one.jsonl"), fixture::read_file(dir / "four.jsonl"));
  EXPECT_EQ(one.samples, four.samples);
  EXPECT_EQ(one.snapshots, 40u);
  EXPECT_FALSE(std::filesystem::exists(dir / "one.jsonl.part"));

  opt.caps.label_cap = 2;
  const CorpusReport capped = synthesize_corpus(files, dir / "capped.jsonl", opt, nullptr);
  EXPECT_LT(capped.samples, one.samples);
  EXPECT_EQ(capped.drops.label_downsampled, one.samples - capped.samples);
  std::map<std::string, std::size_t> freq;
  for_each_record(dir / "capped.jsonl", [&](const ScreenshotRecord& r) {
    for (const auto& s : r.samples) ++freq[label_key(s)];
  });
  for (const auto& [label, n] : freq) EXPECT_LE(n, 2u) << label;

  fixture::write_file(dir / "snaps" / "zz-broken.json", "{\"snapshot_id\": ");
  EXPECT_THROW(synthesize_corpus(list_snapshot_files(dir / "snaps"), dir / "x.jsonl", opt, nullptr),
               DataError);
  EXPECT_THROW(list_snapshot_files(dir / "nope"), DataError);
}

TEST(Direct, MockDescribesMarkedElement) {
  AugmentationConfig cfg;
  cfg.mock = true;
  AugmentationClient client(cfg);
  const PageSnapshot p = page({el("b", "button", {10, 10, 40, 20}, "Go")});
  const auto s = describe_direct(p, p.elements[0], client, {}, DirectStyle::kFunctional);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->re.text, "mock-direct");
  EXPECT_EQ(s->re.descriptor_source, DescriptorSource::kMllmDescription);
  EXPECT_EQ(s->target, (Point{30, 20}));
}

}  // namespace
}  // namespace webground
