// Copyright 2026 The Morp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "cli.h"
#include "json.hpp"
#include "morp/manifest.h"
#include "support/temp_dir.h"

namespace morp::cli {
namespace {

using Json = nlohmann::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "morp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  void Synth(const std::string& out, const std::string& videos = "40") {
    const Outcome o = Invoke({"synth", "--out", Path(out), "--videos", videos, "--frames", "96"});
    ASSERT_EQ(o.code, 0) << o.err;
  }

  morp::testing::TempDir dir_;
};

TEST_F(CliTest, SynthPipelineEvaluateImprovesLabels) {
  Synth("corpus");
  Outcome o = Invoke({"pipeline", "--manifest", Path("corpus/manifest.json"), "--out", Path("run")});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const char* f : {"refined.json", "refine_report.json", "corrected.json", "trace.jsonl"}) {
    EXPECT_TRUE(std::filesystem::exists(dir_ / "run" / f)) << f;
  }
  const Outcome raw = Invoke({"evaluate", "--manifest", Path("corpus/manifest.json")});
  const Outcome fixed = Invoke({"evaluate", "--manifest", Path("run/corrected.json")});
  ASSERT_EQ(raw.code, 0) << raw.err;
  ASSERT_EQ(fixed.code, 0) << fixed.err;
  const Json r = Json::parse(raw.out);
  const Json f = Json::parse(fixed.out);
  EXPECT_GT(f["mean_iou"].get<double>(), r["mean_iou"].get<double>());
  EXPECT_TRUE(r["recall_at"].contains("0.50"));
  EXPECT_TRUE(f.contains("header"));
}

TEST_F(CliTest, StepwiseCommandsMatchPipeline) {
  Synth("corpus");
  ASSERT_EQ(Invoke({"pipeline", "--manifest", Path("corpus/manifest.json"), "--out", Path("run")})
                .code,
            0);
  ASSERT_EQ(Invoke({"refine", "--manifest", Path("corpus/manifest.json"), "--out",
                    Path("step/refined.json"), "--report", Path("step/report.json")})
                .code,
            0);
  const Outcome c = Invoke({"correct", "--manifest", Path("step/refined.json"), "--out",
                            Path("step/corrected.json"), "--trace", Path("step/trace.jsonl")});
  ASSERT_EQ(c.code, 0) << c.err;
  const Json a = Json::parse(ReadTextFile(dir_ / "run/corrected.json"));
  const Json b = Json::parse(ReadTextFile(dir_ / "step/corrected.json"));
  EXPECT_EQ(a["annotations"], b["annotations"]);

  // Replaying the recorded trace reproduces the corrected labels.
  const Outcome replay =
      Invoke({"correct", "--manifest", Path("step/refined.json"), "--out",
              Path("replay/corrected.json"), "--predictions", Path("step/trace.jsonl")});
  ASSERT_EQ(replay.code, 0) << replay.err;
  EXPECT_EQ(Json::parse(ReadTextFile(dir_ / "replay/corrected.json"))["annotations"],
            b["annotations"]);
}

TEST_F(CliTest, OutputsAreByteIdenticalAcrossRunsAndThreads) {
  Synth("corpus");
  ASSERT_EQ(Invoke({"pipeline", "--manifest", Path("corpus/manifest.json"), "--out", Path("a")})
                .code,
            0);
  ASSERT_EQ(Invoke({"pipeline", "--manifest", Path("corpus/manifest.json"), "--out", Path("b"),
                    "--threads", "4"})
                .code,
            0);
  for (const char* f : {"refined.json", "refine_report.json", "corrected.json", "trace.jsonl"}) {
    EXPECT_EQ(ReadTextFile(dir_ / "a" / f), ReadTextFile(dir_ / "b" / f)) << f;
  }
  const Outcome s1 = Invoke({"stats", "--manifest", Path("corpus/manifest.json")});
  const Outcome s2 = Invoke({"stats", "--manifest", Path("corpus/manifest.json"), "--threads", "3"});
  EXPECT_EQ(s1.out, s2.out);
}

TEST_F(CliTest, StatsOnEmptyManifestIsZeros) {
  WriteTextFile(dir_ / "empty.json", R"({"format_version": 1, "videos": [], "annotations": []})");
  const Outcome o = Invoke({"stats", "--manifest", Path("empty.json"), "--format", "table"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("videos"), std::string::npos);
  const Outcome j = Invoke({"stats", "--manifest", Path("empty.json")});
  const Json stats = Json::parse(j.out);
  EXPECT_EQ(stats["video_count"], 0);
  EXPECT_EQ(stats["total_tokens"], 0);
  EXPECT_EQ(stats["vocabulary_size"], 0);
}

TEST_F(CliTest, RejectsCleanRatioOfOne) {
  Synth("corpus", "4");
  const Outcome o = Invoke({"refine", "--manifest", Path("corpus/manifest.json"), "--out",
                            Path("r.json"), "--clean-ratio", "1.0"});
  EXPECT_NE(o.code, 0);
  const Json err = Json::parse(o.err);
  EXPECT_EQ(err["code"], "config_error");
  EXPECT_TRUE(err.contains("message"));
  EXPECT_TRUE(err.contains("context"));
  EXPECT_FALSE(std::filesystem::exists(dir_ / "r.json"));
}

TEST_F(CliTest, ErrorsAreMachineReadable) {
  Outcome o = Invoke({"refine", "--bogus-flag"});
  EXPECT_EQ(o.code, kExitUsageError);
  EXPECT_EQ(Json::parse(o.err)["code"], "usage_error");

  o = Invoke({"stats", "--manifest", Path("missing.json")});
  EXPECT_EQ(o.code, kExitModuleError);
  EXPECT_EQ(Json::parse(o.err)["code"], "io_error");

  WriteTextFile(dir_ / "broken.json", R"({"format_version": 1, "videos": 3})");
  o = Invoke({"stats", "--manifest", Path("broken.json")});
  EXPECT_EQ(Json::parse(o.err)["code"], "format_error");

  o = Invoke({});
  EXPECT_EQ(o.code, kExitUsageError);
}

TEST_F(CliTest, HelpListsFlagsWithPaperDefaults) {
  const Outcome o = Invoke({"pipeline", "--help"});
  ASSERT_EQ(o.code, 0);
  for (const char* needle :
       {"--clean-ratio", "paper default 0.40", "--alpha1", "paper default 0.22", "--alpha2",
        "paper default 0.92", "--delta", "paper default 5", "--epochs", "paper default 15",
        "--lambda", "paper default 0.7", "--capacity", "--predictions-per-query", "--seed",
        "--threads", "MORP_CLEAN_RATIO"}) {
    EXPECT_NE(o.out.find(needle), std::string::npos) << needle;
  }
  EXPECT_NE(Invoke({"synth", "--help"}).out.find("paper default 256"), std::string::npos);
}

std::size_t DroppedCount(const std::filesystem::path& report) {
  const Json doc = Json::parse(ReadTextFile(report));
  std::size_t n = 0;
  for (const Json& a : doc["annotations"]) {
    n += a["decision"] == "dropped";
  }
  return n;
}

TEST_F(CliTest, PrecedenceFlagsOverConfigOverEnvironment) {
  Synth("corpus", "10");
  const std::string manifest = Path("corpus/manifest.json");
  WriteTextFile(dir_ / "cfg.toml", "[refine]\nclean-ratio = 0.5\n");
  auto refine = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = {"refine", "--manifest", manifest, "--out", Path("r.json"),
                                     "--report", Path("report.json")};
    args.insert(args.end(), extra.begin(), extra.end());
    const Outcome o = Invoke(args);
    EXPECT_EQ(o.code, 0) << o.err;
    return DroppedCount(dir_ / "report.json");
  };
  EXPECT_EQ(refine({}), 8u);
  ::setenv("MORP_CLEAN_RATIO", "0.1", 1);
  EXPECT_EQ(refine({}), 2u);
  EXPECT_EQ(refine({"--clean-ratio", "0.3"}), 6u);
  Outcome o = Invoke({"--config", Path("cfg.toml"), "refine", "--manifest", manifest, "--out",
                      Path("r.json"), "--report", Path("report.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(DroppedCount(dir_ / "report.json"), 10u);
  ::unsetenv("MORP_CLEAN_RATIO");
  o = Invoke({"--config", Path("cfg.toml"), "refine", "--manifest", manifest, "--out",
              Path("r.json"), "--report", Path("report.json"), "--clean-ratio", "0.2"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(DroppedCount(dir_ / "report.json"), 4u);
}

TEST_F(CliTest, ConfigHashIgnoresPathsAndThreads) {
  Synth("corpus", "6");
  const std::string manifest = Path("corpus/manifest.json");
  ASSERT_EQ(Invoke({"refine", "--manifest", manifest, "--out", Path("x/r.json")}).code, 0);
  ASSERT_EQ(
      Invoke({"refine", "--manifest", manifest, "--out", Path("y/r.json"), "--threads", "2"}).code,
      0);
  ASSERT_EQ(Invoke({"refine", "--manifest", manifest, "--out", Path("z/r.json"), "--alpha1", "0.3"})
                .code,
            0);
  auto hash = [&](const char* p) {
    return Json::parse(ReadTextFile(dir_ / p))["header"]["config_hash"].get<std::string>();
  };
  EXPECT_EQ(hash("x/r.json"), hash("y/r.json"));
  EXPECT_NE(hash("x/r.json"), hash("z/r.json"));
  EXPECT_EQ(Json::parse(ReadTextFile(dir_ / "x/r.json"))["header"]["tool"], "morp");
}

TEST_F(CliTest, EvaluateWithPredictionFile) {
  Synth("corpus", "5");
  const CorpusManifest m = ReadManifest(dir_ / "corpus/manifest.json");
  Json preds = Json::object();
  preds["predictions"] = Json::array();
  std::size_t with_gt = 0;
  for (std::size_t i = 0; i < m.annotations.size(); ++i) {
    const auto gt = GroundTruthFrames(m.annotations[i], m.videos[i / 2]);
    if (!gt) continue;
    ++with_gt;
    preds["predictions"].push_back(
        {{"annotation_id", m.annotations[i].annotation_id},
         {"boundary_frames", {gt->start(), gt->end()}}});
  }
  WriteTextFile(dir_ / "preds.json", preds.dump());
  const Outcome o = Invoke({"evaluate", "--manifest", Path("corpus/manifest.json"),
                            "--predictions", Path("preds.json"), "--thresholds", "0.1,0.9"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json r = Json::parse(o.out);
  EXPECT_EQ(r["mean_iou"], 100.0);
  EXPECT_EQ(r["recall_at"]["0.90"], 100.0);
  EXPECT_EQ(r["n_queries"], with_gt);
}

TEST_F(CliTest, SweepReportsEveryValue) {
  const Outcome o = Invoke({"sweep", "--knob", "clean_ratio", "--values", "0,0.4", "--seeds", "2",
                            "--videos", "12", "--frames", "64", "--epochs", "3"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json r = Json::parse(o.out);
  EXPECT_EQ(r["knob"], "clean_ratio");
  ASSERT_EQ(r["points"].size(), 2u);
  EXPECT_EQ(r["points"][1]["per_seed_corpus_mean_iou"].size(), 2u);

  const Outcome sizes = Invoke({"sweep", "--knob", "corpus_size", "--values", "4,8", "--seeds",
                                "1", "--frames", "64", "--epochs", "2", "--format", "table"});
  ASSERT_EQ(sizes.code, 0) << sizes.err;
  EXPECT_NE(sizes.out.find("corpus_size"), std::string::npos);
  EXPECT_NE(Invoke({"sweep", "--knob", "corpus_size", "--values", "2.5"}).code, 0);
}

}  // namespace
}  // namespace morp::cli
