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

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "webground/adapters.h"
#include "webground/augmentation.h"
#include "webground/errors.h"
#include "webground/eval.h"
#include "webground/marker.h"
#include "webground/pipeline.h"
#include "webground/resolution.h"
#include "webground/sampler.h"
#include "webground/snapshot.h"

namespace webground::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write " + p.string());
  os << body;
  if (!os) throw DataError("write failed: " + p.string());
}

// Writes to `path`, or to `out` when no path was given.
void emit(const std::string& path, const std::string& body, std::ostream& out) {
  if (path.empty()) {
    out << body;
  } else {
    write_file(path, body);
  }
}

std::string format_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", s);
  return buf;
}

void log_drops(std::ostream& err, const DropCounts& d) {
  err << "drops invisible=" << d.invisible << " invalid_element=" << d.invalid_element
      << " ambiguous=" << d.ambiguous << " no_descriptor=" << d.no_descriptor
      << " not_selected=" << d.not_selected << " label_downsampled=" << d.label_downsampled
      << " augmentation_skipped=" << d.augmentation_skipped << "\n";
}

struct AugmentationFlags {
  bool mock = false;
  double requests_per_second = 0.0;
  int max_in_flight = 4;
  std::optional<double> temperature;

  void add_to(CLI::App* app) {
    app->add_flag("--mock-llm", mock, "Use the deterministic offline description service");
    app->add_option("--requests-per-second", requests_per_second,
                    "Rate limit for description requests (0: unlimited)");
    app->add_option("--max-in-flight", max_in_flight, "Concurrent description requests");
    app->add_option("--temperature", temperature, "Sampling temperature sent to the service");
  }

  std::unique_ptr<AugmentationClient> make_client() const {
    AugmentationConfig cfg = AugmentationConfig::from_env();
    cfg.mock = cfg.mock || mock;
    cfg.requests_per_second = requests_per_second;
    cfg.max_in_flight = max_in_flight;
    cfg.temperature = temperature;
    if (!cfg.mock && cfg.endpoint.empty()) {
      throw RemoteError("AUG_ENDPOINT is not set; pass --mock-llm to run offline");
    }
    return std::make_unique<AugmentationClient>(std::move(cfg));
  }
};

void check_remote(const AugmentationClient& client) {
  const AugmentationStats s = client.stats();
  if (!client.mock() && s.requests > 0 && s.successes == 0 && s.transport_failures > 0) {
    throw RemoteError("description service unreachable: " + std::to_string(s.transport_failures) +
                      " failed attempts, no successful request");
  }
}

// ---- extract -------------------------------------------------------------

struct ExtractCmd {
  std::string in;
  std::string out;

  void add(CLI::App& root) {
    CLI::App* c = root.add_subcommand(
        "extract", "Validate and normalize page-extractor snapshots");
    c->add_option("--in", in, "Snapshot JSON file or directory")->required();
    c->add_option("--out", out, "Output file (or directory for directory input)")->required();
    cmd = c;
  }

  int run(std::ostream& err) const {
    const auto files = list_snapshot_files(in);
    const bool to_dir = fs::is_directory(in);
    if (to_dir) fs::create_directories(out);
    std::size_t violations = 0;
    for (const auto& f : files) {
      const PageSnapshot snap = parse_snapshot(read_file(f));
      for (const auto& v : validate_snapshot(snap)) {
        ++violations;
        err << f.string() << ": " << (v.element_id.empty() ? "" : v.element_id + ": ") << v.rule
            << "\n";
      }
      write_file(to_dir ? fs::path(out) / f.filename() : fs::path(out),
                 serialize_snapshot(snap) + "\n");
    }
    err << "extract snapshots=" << files.size() << " violations=" << violations << "\n";
    return violations == 0 ? kExitOk : kExitData;
  }

  CLI::App* cmd = nullptr;
};

// ---- synthesize ----------------------------------------------------------

struct SynthesizeCmd {
  std::string in;
  std::string out;
  std::string policy_path;
  std::string work_dir;
  std::string stats_out;
  std::uint64_t seed = 0;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  Caps caps;
  std::size_t max_anchor_chars = 60;
  bool quiet = false;
  AugmentationFlags aug;

  void add(CLI::App& root) {
    CLI::App* c = root.add_subcommand("synthesize", "Synthesize grounding samples from snapshots");
    c->add_option("--in", in, "Snapshot directory or file")->required();
    c->add_option("--out", out, "Output JSONL")->required();
    seed_opt = c->add_option("--seed", seed, "Seed for every random choice");
    c->add_option("--policy", policy_path, "Synthesis policy JSON");
    c->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    c->add_option("--work-dir", work_dir, "Scratch directory for element crops");
    c->add_option("--stats-out", stats_out, "Also write corpus statistics here");
    c->add_option("--page-elems", caps.page_elems, "Max elements per page");
    c->add_option("--label-cap", caps.label_cap, "Max occurrences per label");
    c->add_option("--rel-dist", caps.rel_dist, "Max anchor distance in pixels");
    c->add_option("--sim-threshold", caps.sim_threshold, "OCR similarity threshold")
        ->check(CLI::Range(0.0, 1.0));
    c->add_option("--max-anchor-chars", max_anchor_chars, "Longest usable anchor name");
    c->add_flag("--quiet", quiet, "Only log the summary");
    aug.add_to(c);
    cmd = c;
  }

  int run(std::ostream& err) const {
    SynthesisOptions opts;
    opts.caps = caps;
    if (!policy_path.empty()) opts.policy = parse_policy(read_file(policy_path));
    if (seed_opt->count() > 0 || policy_path.empty()) opts.policy.seed = seed;
    opts.policy.validate();
    opts.jobs = jobs;
    opts.max_anchor_chars = max_anchor_chars;
    opts.work_dir = work_dir.empty() ? fs::path(out + ".work") : fs::path(work_dir);
    auto client = aug.make_client();

    const auto files = list_snapshot_files(in);
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    ProgressFn progress;
    if (!quiet) {
      progress = [&](std::size_t done, std::size_t total) {
        const double s = elapsed();
        err << "synthesize " << done << "/" << total << " snapshots, "
            << format_seconds(s > 0 ? done / s : 0.0) << " snapshots/s\n";
      };
    }
    const CorpusReport r = synthesize_corpus(files, out, opts, client.get(), progress);
    check_remote(*client);
    err << "synthesize snapshots=" << r.snapshots << " records=" << r.records
        << " samples=" << r.samples << " candidates=" << r.candidates
        << " mllm_annotated=" << r.mllm_annotated << " capped_labels="
        << r.downsample.capped_labels << " seconds=" << format_seconds(elapsed()) << "\n";
    log_drops(err, r.drops);
    if (!stats_out.empty()) {
      StatsAccumulator acc;
      for_each_record(out, [&](const ScreenshotRecord& rec) { acc.add(rec); });
      write_file(stats_out, serialize_stats(acc.report()) + "\n");
    }
    return kExitOk;
  }

  CLI::App* cmd = nullptr;
  CLI::Option* seed_opt = nullptr;
};

// ---- direct --------------------------------------------------------------

struct DirectCmd {
  std::string in;
  std::string out;
  std::string style = "free";
  std::string work_dir;
  std::size_t per_page = 10;
  std::uint64_t seed = 0;
  AugmentationFlags aug;

  void add(CLI::App& root) {
    CLI::App* c =
        root.add_subcommand("direct", "Describe marker-annotated elements with the service");
    c->add_option("--in", in, "Snapshot directory or file")->required();
    c->add_option("--out", out, "Output JSONL")->required();
    c->add_option("--style", style, "Description style")
        ->check(CLI::IsMember({"free", "functional"}));
    c->add_option("--per-page", per_page, "Elements described per page");
    c->add_option("--seed", seed, "Seed for element choice");
    c->add_option("--work-dir", work_dir, "Scratch directory for annotated images");
    aug.add_to(c);
    cmd = c;
  }

  int run(std::ostream& err) const {
    auto client = aug.make_client();
    const DirectStyle st = style == "functional" ? DirectStyle::kFunctional : DirectStyle::kFree;
    const fs::path scratch = work_dir.empty() ? fs::path(out + ".work") : fs::path(work_dir);
    std::ofstream os(out, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot write " + out);
    std::size_t samples = 0;
    std::size_t dropped = 0;
    const auto files = list_snapshot_files(in);
    for (const auto& f : files) {
      const PageSnapshot snap = load_snapshot(f);
      std::vector<std::size_t> pick;
      for (std::size_t i = 0; i < snap.elements.size(); ++i) {
        const ElementRecord& e = snap.elements[i];
        if (e.visible && classify_tag(e.tag) == ElementKind::kInteractive &&
            e.bbox.w >= kMarkerMinBox && e.bbox.h >= kMarkerMinBox) {
          pick.push_back(i);
        }
      }
      Rng rng = derive_rng(seed, {snap.snapshot_id, "direct"});
      rng.shuffle(pick.begin(), pick.end());
      if (pick.size() > per_page) pick.resize(per_page);
      std::sort(pick.begin(), pick.end());
      ScreenshotRecord rec{snap.snapshot_id, snap.screenshot_ref, {}};
      for (std::size_t i : pick) {
        auto s = describe_direct(snap, snap.elements[i], *client, scratch, st, f.parent_path());
        if (s) {
          rec.samples.push_back(std::move(*s));
        } else {
          ++dropped;
        }
      }
      samples += rec.samples.size();
      if (!rec.samples.empty()) os << serialize_record(rec) << "\n";
    }
    check_remote(*client);
    err << "direct snapshots=" << files.size() << " samples=" << samples
        << " dropped=" << dropped << "\n";
    return kExitOk;
  }

  CLI::App* cmd = nullptr;
};

// ---- adapt ---------------------------------------------------------------

struct AdaptCmd {
  std::string source;
  std::string profile;
  std::string in;
  std::string out;
  std::uint64_t seed = 0;

  void add(CLI::App& root) {
    CLI::App* c = root.add_subcommand("adapt", "Convert an open-source dataset to samples");
    c->add_option("--source", source, "Source name")
        ->required()
        ->check(CLI::IsMember({"guiact", "androidcontrol", "widget_caption", "uibert", "aitz",
                               "web_direct"}));
    c->add_option("--profile", profile, "Field-mapping profile JSON")->required();
    c->add_option("--in", in, "Raw dataset file")->required();
    c->add_option("--out", out, "Output JSONL")->required();
    c->add_option("--seed", seed, "Seed for caption choice");
    cmd = c;
  }

  int run(std::ostream& err) const {
    SourceSpec spec;
    spec.name = *source_from_name(source);
    spec.path = in;
    spec.profile = load_profile(profile);
    const AdaptCounts c = adapt_to_file(spec, seed, out);
    err << "adapt source=" << source << " records_in=" << c.records_in
        << " emitted=" << c.records_emitted << " samples=" << c.samples
        << " no_coordinates=" << c.no_coordinates << " multi_step=" << c.multi_step
        << " not_visible=" << c.not_visible << " unmappable=" << c.unmappable << "\n";
    return kExitOk;
  }

  CLI::App* cmd = nullptr;
};

// ---- stats / downsample ----------------------------------------------------

struct StatsCmd {
  std::string in;
  std::string out;

  void add(CLI::App& root) {
    CLI::App* c = root.add_subcommand("stats", "Element, descriptor and RE-type shares");
    c->add_option("--in", in, "Sample JSONL")->required();
    c->add_option("--out", out, "Report JSON (default: stdout)");
    cmd = c;
  }

  int run(std::ostream& out_stream) const {
    StatsAccumulator acc;
    for_each_record(in, [&](const ScreenshotRecord& r) { acc.add(r); });
    emit(out, serialize_stats(acc.report()) + "\n", out_stream);
    return kExitOk;
  }

  CLI::App* cmd = nullptr;
};

struct DownsampleCmd {
  std::string in;
  std::string out;
  std::size_t cap = kLabelFrequencyCap;
  std::uint64_t seed = 0;

  void add(CLI::App& root) {
    CLI::App* c = root.add_subcommand("downsample", "Cap per-label frequency");
    c->add_option("--in", in, "Sample JSONL")->required();
    c->add_option("--out", out, "Output JSONL")->required();
    c->add_option("--cap", cap, "Max occurrences per label");
    c->add_option("--seed", seed, "Seed for survivor ranks");
    cmd = c;
  }

  int run(std::ostream& err) const {
    if (fs::exists(out) && fs::equivalent(in, out)) {
      throw DataError("--in and --out must differ");
    }
    const DownsampleReport r = downsample_file(in, out, cap, seed);
    err << "downsample records_in=" << r.records_in << " records_out=" << r.records_out
        << " samples_in=" << r.samples_in << " samples_out=" << r.samples_out
        << " capped_labels=" << r.capped_labels << "\n";
    return kExitOk;
  }

  CLI::App* cmd = nullptr;
};

// ---- eval ------------------------------------------------------------------

struct EvalCmd {
  std::string preds;
  std::string gold;
  std::string out;
  std::string format = "json";
  int canvas_height = 0;
  int block_height = kBlockHeight;
  std::string snapshot;
  int x = 0;
  int y = 0;

  void add(CLI::App& root) {
    cmd = root.add_subcommand("eval", "Evaluation geometry and metrics");
    cmd->require_subcommand(1);
    ground = cmd->add_subcommand("ground", "Point-in-box accuracy by platform and type");
    ground->add_option("--preds", preds, "Predictions JSONL")->required();
    ground->add_option("--gold", gold, "Gold JSONL")->required();
    ground->add_option("--out", out, "Report path (default: stdout)");
    ground->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "text"}));
    blocks = cmd->add_subcommand("blocks", "Split a full page into viewport blocks");
    blocks->add_option("--height", canvas_height, "Page height in pixels")
        ->required()
        ->check(CLI::PositiveNumber);
    blocks->add_option("--block-height", block_height, "Block height")
        ->check(CLI::PositiveNumber);
    snap = cmd->add_subcommand("snap", "Smallest visible element containing a point");
    snap->add_option("--snapshot", snapshot, "Snapshot JSON")->required();
    snap->add_option("--x", x, "Point x")->required();
    snap->add_option("--y", y, "Point y")->required();
  }

  int run(std::ostream& out_stream, std::ostream& err) const {
    if (ground->parsed()) {
      std::ifstream pin(preds, std::ios::binary);
      if (!pin) throw DataError("cannot open " + preds);
      std::ifstream gin(gold, std::ios::binary);
      if (!gin) throw DataError("cannot open " + gold);
      const auto p = read_predictions(pin);
      const auto g = read_gold(gin);
      const JoinedEval joined = join_predictions(g, p);
      if (joined.missing_predictions > 0) {
        err << "eval missing_predictions=" << joined.missing_predictions << "\n";
      }
      const AccuracyTable table = aggregate_screenspot(joined.records);
      emit(out, format == "json" ? accuracy_table_json(table) + "\n" : accuracy_table_text(table),
           out_stream);
      return kExitOk;
    }
    if (blocks->parsed()) {
      ordered_json arr = ordered_json::array();
      for (const Block& b : split_page_blocks(canvas_height, block_height)) {
        arr.push_back({{"y_offset", b.y_offset}, {"height", b.height}});
      }
      out_stream << arr.dump() << "\n";
      return kExitOk;
    }
    const PageSnapshot s = load_snapshot(snapshot);
    const auto id = snap_to_element({x, y}, s.elements);
    ordered_json doc;
    doc["id"] = id ? json(*id) : json(nullptr);
    out_stream << doc.dump() << "\n";
    return kExitOk;
  }

  CLI::App* cmd = nullptr;
  CLI::App* ground = nullptr;
  CLI::App* blocks = nullptr;
  CLI::App* snap = nullptr;
};

// ---- plan-res / mark -------------------------------------------------------

struct PlanResCmd {
  int width = 0;
  int height = 0;

  void add(CLI::App& root) {
    cmd = root.add_subcommand("plan-res", "Slice grid for a screenshot size");
    cmd->add_option("--width", width, "Width in pixels")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--height", height, "Height in pixels")->required()->check(CLI::PositiveNumber);
  }

  int run(std::ostream& out) const {
    const GridPlan p = plan_grid(width, height);
    const ResizeResult r = resize_for_model(width, height);
    ordered_json doc;
    doc["cols"] = p.cols;
    doc["rows"] = p.rows;
    doc["cell"] = p.cell;
    doc["cells"] = p.cells();
    doc["target_width"] = p.target_width;
    doc["target_height"] = p.target_height;
    doc["scale"] = p.scale;
    doc["pad_bottom"] = p.pad_bottom;
    doc["pad_right"] = p.pad_right;
    doc["resize"] = {{"width", r.width}, {"height", r.height}, {"scale", r.scale}};
    out << doc.dump() << "\n";
    return kExitOk;
  }

  CLI::App* cmd = nullptr;
};

struct MarkCmd {
  std::string screenshot;
  std::vector<int> bbox;
  std::string out;

  void add(CLI::App& root) {
    cmd = root.add_subcommand("mark", "Draw the red box-and-arrow marker");
    cmd->add_option("--screenshot", screenshot, "Input PNG")->required();
    cmd->add_option("--bbox", bbox, "x,y,w,h")->required()->expected(4)->delimiter(',');
    cmd->add_option("--out", out, "Output PNG")->required();
  }

  int run(std::ostream& err) const {
    const BBox b{bbox[0], bbox[1], bbox[2], bbox[3]};
    try {
      render_marker(screenshot, b, out);
    } catch (const std::invalid_argument& e) {
      throw DataError(e.what());
    }
    err << "mark wrote " << out << "\n";
    return kExitOk;
  }

  CLI::App* cmd = nullptr;
};

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.starts_with(flag + "=")) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ValidationError(path, "config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (has_flag(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      args.push_back(flag);
      args.push_back(value.dump());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ",";
        joined += v.is_string() ? v.get<std::string>() : v.dump();
      }
      args.push_back(flag);
      args.push_back(joined);
    } else {
      throw ValidationError(path + ": " + key, "unsupported value");
    }
  }
  return args;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesize and evaluate GUI visual grounding data", "webground"};
  app.require_subcommand(1);
  app.add_option("--config", "JSON file whose keys mirror the flags; flags win");

  ExtractCmd extract;
  SynthesizeCmd synthesize;
  DirectCmd direct;
  AdaptCmd adapt;
  StatsCmd stats;
  DownsampleCmd downsample;
  EvalCmd eval;
  PlanResCmd plan_res;
  MarkCmd mark;
  extract.add(app);
  synthesize.add(app);
  direct.add(app);
  adapt.add(app);
  stats.add(app);
  downsample.add(app);
  eval.add(app);
  plan_res.add(app);
  mark.add(app);

  try {
    std::vector<std::string> args = apply_config(raw_args);
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    try {
      app.parse(rev);
    } catch (const CLI::ParseError& e) {
      std::ostringstream o;
      std::ostringstream e2;
      const int code = app.exit(e, o, e2);
      out << o.str();
      err << e2.str();
      return code == 0 ? kExitOk : kExitUsage;
    }
    if (extract.cmd->parsed()) return extract.run(err);
    if (synthesize.cmd->parsed()) return synthesize.run(err);
    if (direct.cmd->parsed()) return direct.run(err);
    if (adapt.cmd->parsed()) return adapt.run(err);
    if (stats.cmd->parsed()) return stats.run(out);
    if (downsample.cmd->parsed()) return downsample.run(err);
    if (eval.cmd->parsed()) return eval.run(out, err);
    if (plan_res.cmd->parsed()) return plan_res.run(out);
    if (mark.cmd->parsed()) return mark.run(err);
    return kExitUsage;
  } catch (const RemoteError& e) {
    err << "error: " << e.what() << "\n";
    return kExitRemote;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << " (byte " << e.offset() << ")\n";
    return kExitData;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace webground::cli
