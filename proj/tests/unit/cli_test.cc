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

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "fixtures.h"
#include "json.hpp"
#include "webground/image.h"
#include "webground/sampler.h"

namespace webground {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "webground");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    unsetenv("AUG_ENDPOINT");
    unsetenv("AUG_MOCK");
  }
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"plan-res", "--width", "10"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"plan-res", "--width", "0", "--height", "10"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"eval", "ground", "--preds", "p", "--gold", "g", "--format", "xml"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, PlanRes) {
  const Result r = run({"plan-res", "--width", "1344", "--height", "1344"});
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["cols"], 6);
  EXPECT_EQ(doc["rows"], 6);
  EXPECT_EQ(doc["cells"], 36);
}

TEST_F(CliTest, EvalBlocksAndSnap) {
  Result r = run({"eval", "blocks", "--height", "2500"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out),
            nlohmann::json::parse(R"([{"y_offset":0,"height":1000},{"y_offset":1000,"height":1000},)"
                                  R"({"y_offset":2000,"height":500}])"));
  fixture::TempDir dir("cli-snap");
  const PageSnapshot p = fixture::random_scatter(5, "s");
  fixture::write_file(dir / "s.json", serialize_snapshot(p));
  const Point c = center_point(p.elements[0].bbox);
  r = run({"eval", "snap", "--snapshot", (dir / "s.json").string(), "--x", std::to_string(c.x),
           "--y", std::to_string(c.y)});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out).contains("id"));
  r = run({"eval", "snap", "--snapshot", (dir / "missing.json").string(), "--x", "1", "--y", "1"});
  EXPECT_EQ(r.code, cli::kExitData);
}

TEST_F(CliTest, EvalGround) {
  fixture::TempDir dir("cli-eval");
  fixture::write_file(dir / "gold.jsonl",
                      R"({"id": "a", "bbox": {"x": 0, "y": 0, "w": 10, "h": 10}, "platform": "web", "elem_type": "text"})"
                      "\n");
  fixture::write_file(dir / "preds.jsonl", R"j({"id": "a", "answer": "(5, 5)"})j"
                                           "\n");
  Result r = run({"eval", "ground", "--preds", (dir / "preds.jsonl").string(), "--gold",
                  (dir / "gold.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["average_cell_mean"], 100.0);
  r = run({"eval", "ground", "--preds", (dir / "preds.jsonl").string(), "--gold",
           (dir / "gold.jsonl").string(), "--format", "text"});
  EXPECT_NE(r.out.find("100.00"), std::string::npos);
  fixture::write_file(dir / "bad.jsonl", "{\n");
  r = run({"eval", "ground", "--preds", (dir / "preds.jsonl").string(), "--gold",
           (dir / "bad.jsonl").string()});
  EXPECT_EQ(r.code, cli::kExitData);
}

TEST_F(CliTest, ExtractReportsViolations) {
  fixture::TempDir dir("cli-extract");
  fixture::write_corpus(dir / "in", 3, 1);
  Result r = run({"extract", "--in", (dir / "in").string(), "--out", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "page-0000.json"));
  PageSnapshot bad = fixture::random_page(1, "bad");
  bad.elements[0].bbox.w = 0;
  fixture::write_file(dir / "bad.json", serialize_snapshot(bad));
  r = run({"extract", "--in", (dir / "bad.json").string(), "--out", (dir / "b.json").string()});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("non-positive width"), std::string::npos);
  fixture::write_file(dir / "junk.json", "[1, 2");
  r = run({"extract", "--in", (dir / "junk.json").string(), "--out", (dir / "j.json").string()});
  EXPECT_EQ(r.code, cli::kExitData);
}

TEST_F(CliTest, SynthesizeIsDeterministicAcrossJobs) {
  fixture::TempDir dir("cli-synth");
  fixture::write_corpus(dir / "in", 12, 9);
  const std::string in = (dir / "in").string();
  Result a = run({"synthesize", "--in", in, "--out", (dir / "a.jsonl").string(), "--seed", "7",
                  "--mock-llm", "--jobs", "1", "--stats-out", (dir / "stats.json").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.err.find("synthesize 12/12 snapshots"), std::string::npos);
  EXPECT_NE(a.err.find("drops invisible="), std::string::npos);
  Result b = run({"synthesize", "--in", in, "--out", (dir / "b.jsonl").string(), "--seed", "7",
                  "--mock-llm", "--jobs", "3", "--quiet"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(b.err.find("snapshots/s"), std::string::npos);
  EXPECT_EQ(fixture::read_file(dir / "a.jsonl"), fixture::read_file(dir / "b.jsonl"));
  Result c = run({"synthesize", "--in", in, "--out", (dir / "c.jsonl").string(), "--seed", "8",
                  "--mock-llm", "--quiet"});
  ASSERT_EQ(c.code, 0);
  EXPECT_NE(fixture::read_file(dir / "a.jsonl"), fixture::read_file(dir / "c.jsonl"));

  const Result s = run({"stats", "--in", (dir / "a.jsonl").string()});
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(nlohmann::json::parse(s.out), nlohmann::json::parse(fixture::read_file(dir / "stats.json")));
}

TEST_F(CliTest, ConfigFileSuppliesFlags) {
  fixture::TempDir dir("cli-config");
  fixture::write_corpus(dir / "in", 4, 2);
  fixture::write_file(dir / "cfg.json", R"({"seed": 7, "mock_llm": true, "jobs": 2, "quiet": true})");
  Result a = run({"synthesize", "--in", (dir / "in").string(), "--out", (dir / "a.jsonl").string(),
                  "--config", (dir / "cfg.json").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  Result b = run({"synthesize", "--in", (dir / "in").string(), "--out", (dir / "b.jsonl").string(),
                  "--seed", "7", "--mock-llm", "--quiet"});
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(fixture::read_file(dir / "a.jsonl"), fixture::read_file(dir / "b.jsonl"));
  Result c = run({"synthesize", "--in", (dir / "in").string(), "--out", (dir / "c.jsonl").string(),
                  "--seed", "8", "--config", (dir / "cfg.json").string()});
  ASSERT_EQ(c.code, 0);
  EXPECT_NE(fixture::read_file(dir / "a.jsonl"), fixture::read_file(dir / "c.jsonl"));
  const auto expanded = cli::apply_config(
      {"webground", "synthesize", "--seed", "1", "--config", (dir / "cfg.json").string()});
  EXPECT_EQ(std::count(expanded.begin(), expanded.end(), "--seed"), 1);
  fixture::write_file(dir / "bad.json", "[1]");
  EXPECT_EQ(run({"stats", "--in", "x", "--config", (dir / "bad.json").string()}).code,
            cli::kExitData);
}

TEST_F(CliTest, PolicyFileAndSeedOverride) {
  fixture::TempDir dir("cli-policy");
  fixture::write_corpus(dir / "in", 4, 4);
  fixture::write_file(dir / "policy.json", R"({"seed": 3, "p_absolute": 0.5})");
  const std::string in = (dir / "in").string();
  Result a = run({"synthesize", "--in", in, "--out", (dir / "a.jsonl").string(), "--policy",
                  (dir / "policy.json").string(), "--mock-llm", "--quiet"});
  Result b = run({"synthesize", "--in", in, "--out", (dir / "b.jsonl").string(), "--policy",
                  (dir / "policy.json").string(), "--seed", "3", "--mock-llm", "--quiet"});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(fixture::read_file(dir / "a.jsonl"), fixture::read_file(dir / "b.jsonl"));
  fixture::write_file(dir / "bad.json", R"({"p_absolute": 2})");
  EXPECT_EQ(run({"synthesize", "--in", in, "--out", (dir / "c.jsonl").string(), "--policy",
                 (dir / "bad.json").string(), "--mock-llm"})
                .code,
            cli::kExitData);
}

TEST_F(CliTest, RemoteFailures) {
  fixture::TempDir dir("cli-remote");
  PageSnapshot p;
  p.snapshot_id = "r";
  p.viewport = {200, 100};
  p.canvas = {200, 100};
  p.screenshot_ref = "r.png";
  ElementRecord e;
  e.id = "icon";
  e.tag = "img";
  e.bbox = {10, 10, 20, 20};
  p.elements.push_back(e);
  fixture::write_file(dir / "in" / "r.json", serialize_snapshot(p));
  write_png(Image(200, 100, {255, 255, 255}), dir / "in" / "r.png");
  const std::string in = (dir / "in").string();

  Result r = run({"synthesize", "--in", in, "--out", (dir / "a.jsonl").string()});
  EXPECT_EQ(r.code, cli::kExitRemote);
  setenv("AUG_ENDPOINT", "http://127.0.0.1:9/v1/chat", 1);
  r = run({"synthesize", "--in", in, "--out", (dir / "a.jsonl").string(), "--quiet"});
  EXPECT_EQ(r.code, cli::kExitRemote) << r.err;
  EXPECT_NE(r.err.find("unreachable"), std::string::npos);
  unsetenv("AUG_ENDPOINT");
  setenv("AUG_MOCK", "1", 1);
  r = run({"direct", "--in", in, "--out", (dir / "d.jsonl").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(fixture::read_file(dir / "d.jsonl").find("mock-direct"), std::string::npos);
}

TEST_F(CliTest, AdaptDownsampleAndMark) {
  fixture::TempDir dir("cli-adapt");
  const std::string profiles = std::string(WEBGROUND_CONFIG_DIR) + "/profiles/";
  const std::string sources = std::string(WEBGROUND_FIXTURE_DIR) + "/sources/";
  Result r = run({"adapt", "--source", "guiact", "--profile", profiles + "guiact.json", "--in",
                  sources + "guiact.jsonl", "--out", (dir / "g.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("samples=3"), std::string::npos);
  r = run({"adapt", "--source", "aitz", "--profile", profiles + "guiact.json", "--in",
           sources + "guiact.jsonl", "--out", (dir / "x.jsonl").string()});
  EXPECT_EQ(r.code, cli::kExitData);
  r = run({"adapt", "--source", "rico", "--profile", "p", "--in", "i", "--out", "o"});
  EXPECT_EQ(r.code, cli::kExitUsage);

  r = run({"downsample", "--in", (dir / "g.jsonl").string(), "--out", (dir / "d.jsonl").string(),
           "--cap", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("samples_in=3"), std::string::npos);
  r = run({"downsample", "--in", (dir / "g.jsonl").string(), "--out", (dir / "g.jsonl").string()});
  EXPECT_EQ(r.code, cli::kExitData);

  write_png(Image(100, 80, {0, 0, 255}), dir / "shot.png");
  r = run({"mark", "--screenshot", (dir / "shot.png").string(), "--bbox", "30,20,20,10", "--out",
           (dir / "m.png").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_png(dir / "m.png").at(30, 20), kMarkerRed);
  r = run({"mark", "--screenshot", (dir / "shot.png").string(), "--bbox", "30,20,1,1", "--out",
           (dir / "m2.png").string()});
  EXPECT_EQ(r.code, cli::kExitData);
}

}  // namespace
}  // namespace webground
