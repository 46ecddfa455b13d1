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

#include "cli.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "morp/error.h"
#include "morp/eval.h"
#include "morp/manifest.h"
#include "morp/pipeline.h"
#include "morp/rng.h"
#include "morp/synth.h"

namespace morp::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kTool = "morp";

struct Options {
  int threads = 1;
  std::uint64_t seed = 0;

  SynthSpec synth;
  double boundary_noise = -1.0;

  PipelineConfig pipeline;
  int min_length = -1;

  std::string manifest;
  std::string out;
  std::string report;
  std::string trace;
  std::string predictions;
  std::string format = "json";
  std::vector<double> thresholds{0.3, 0.5, 0.7};

  std::string knob = "clean_ratio";
  std::vector<double> values;
  int n_seeds = 5;
};

std::string EnvName(const std::string& flag) {
  std::string env = "MORP_";
  for (const char c : flag) {
    env += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return env;
}

template <typename T>
CLI::Option* Add(CLI::App* app, const std::string& names, T& var, const std::string& help) {
  CLI::Option* opt = app->add_option(names, var, help)->capture_default_str();
  opt->envname(EnvName(opt->get_single_name()));
  return opt;
}

void AddCommon(CLI::App* app, Options& o) {
  Add(app, "--threads", o.threads, "worker threads; output is identical for any value")
      ->check(CLI::PositiveNumber);
  Add(app, "--seed", o.seed, "master seed");
}

void AddOutputFormat(CLI::App* app, Options& o) {
  Add(app, "--out", o.out, "write the result here instead of standard output");
  Add(app, "--format", o.format, "json or table")->check(CLI::IsMember({"json", "table"}));
}

void AddSynthFlags(CLI::App* app, Options& o) {
  SynthSpec& s = o.synth;
  Add(app, "--videos", s.n_videos, "number of videos");
  Add(app, "--frames", s.num_frames, "frames per video T (paper default 256)");
  Add(app, "--dim", s.dim, "feature dimension (D)");
  Add(app, "--annotations-per-video", s.annotations_per_video, "pseudo annotations per video");
  Add(app, "--p-idle", s.p_idle, "probability of an idle annotation");
  Add(app, "--p-unmatched", s.p_unmatched, "probability of an unmatched annotation");
  Add(app, "--p-imprecise", s.p_imprecise, "probability of an imprecise boundary");
  Add(app, "--boundary-noise", o.boundary_noise,
      "std-dev of endpoint noise in frames; negative means T/6");
  Add(app, "--signal-level", s.signal_level, "mapped similarity inside the true moment");
  Add(app, "--noise-level", s.noise_level, "mapped similarity outside the true moment");
  Add(app, "--similarity-jitter", s.similarity_jitter, "per-frame similarity jitter");
}

void AddRefineFlags(CLI::App* app, Options& o) {
  CleanParams& c = o.pipeline.clean;
  AdjustParams& a = o.pipeline.adjust;
  Add(app, "--clean-ratio", c.ratio, "fraction R of lowest-contrast annotations dropped (paper default 0.40)");
  Add(app, "--delta", a.delta, "adjustment window and step in frames (paper default 5)");
  Add(app, "--alpha1", a.alpha1, "shrink threshold relative to inside mean (paper default 0.22)");
  Add(app, "--alpha2", a.alpha2, "expand threshold relative to inside mean (paper default 0.92)");
  Add(app, "--max-adjust-iters", a.max_iters, "adjustment iteration cap");
  Add(app, "--min-length", o.min_length, "shortest boundary shrinking may leave; negative means delta");
}

void AddCorrectFlags(CLI::App* app, Options& o) {
  CorrectionParams& c = o.pipeline.correction;
  ProposalParams& p = o.pipeline.proposal;
  Add(app, "--epochs", c.epochs, "correction epochs (paper default 15)");
  Add(app, "--lambda", c.lambda, "consensus target weight (paper default 0.7)");
  Add(app, "--capacity", c.capacity, "memory bank capacity");
  Add(app, "-U,--predictions-per-query", c.predictions_per_query,
      "predictions requested per annotation and epoch");
  Add(app, "--stride", p.stride, "reference predictor window stride in frames");
  Add(app, "--jitter", p.jitter, "reference predictor endpoint jitter in frames");
  Add(app, "--nms-iou", p.nms_iou, "reference predictor suppression IoU");
}

// Folds flag-level conventions into the library structs.
void Finalize(Options& o) {
  if (o.boundary_noise >= 0.0) o.synth.boundary_noise_frames = o.boundary_noise;
  o.synth.seed = o.seed;
  o.pipeline.adjust.min_len = o.min_length >= 0 ? o.min_length : o.pipeline.adjust.delta;
  o.pipeline.correction.seed = o.seed;
}

Json CleanJson(const Options& o) {
  const AdjustParams& a = o.pipeline.adjust;
  return {{"clean_ratio", o.pipeline.clean.ratio},
          {"delta", a.delta},
          {"alpha1", a.alpha1},
          {"alpha2", a.alpha2},
          {"max_adjust_iters", a.max_iters},
          {"min_length", a.min_len}};
}

Json CorrectJson(const Options& o, bool recorded) {
  const CorrectionParams& c = o.pipeline.correction;
  const ProposalParams& p = o.pipeline.proposal;
  Json j{{"epochs", c.epochs},
         {"lambda", c.lambda},
         {"capacity", c.capacity},
         {"predictions_per_query", c.predictions_per_query},
         {"predictor", recorded ? "recorded" : "reference"}};
  if (!recorded) {
    j["fractions"] = p.window_fractions;
    j["stride"] = p.stride;
    j["jitter"] = p.jitter;
    j["nms_iou"] = p.nms_iou;
  }
  return j;
}

Provenance MakeHeader(const Options& o, Json config) {
  config["seed"] = o.seed;
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(HashString(config.dump())));
  return Provenance{kTool, MORP_VERSION, hash, o.seed};
}

void EnsureParent(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
}

void Emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
  } else {
    EnsureParent(o.out);
    WriteTextFile(o.out, text);
  }
}

Corpus LoadInput(const Options& o) {
  return LoadCorpus(ReadManifest(o.manifest), o.threads);
}

void RunSynth(Options& o) {
  Corpus corpus = GenerateCorpus(o.synth, o.threads);
  corpus.manifest.header =
      MakeHeader(o, Json{{"command", "synth"}, {"synth", Json::parse(o.synth.ToJson())}});
  WriteCorpus(corpus, o.out);
}

void RunRefine(Options& o) {
  const Corpus corpus = LoadInput(o);
  RefineResult result = RefineCorpus(corpus, o.pipeline.clean, o.pipeline.adjust, o.threads);
  const Provenance header = MakeHeader(o, Json{{"command", "refine"}, {"refine", CleanJson(o)}});
  result.manifest.header = header;
  EnsureParent(o.out);
  WriteManifest(result.manifest, o.out);
  if (!o.report.empty()) {
    EnsureParent(o.report);
    WriteTextFile(o.report, RefineReportToJson(result.report, header));
  }
}

std::unique_ptr<Predictor> MakePredictor(const Options& o) {
  if (!o.predictions.empty()) {
    return std::make_unique<RecordedPredictor>(RecordedPredictor::FromFile(o.predictions));
  }
  return std::make_unique<ReferencePredictor>(o.pipeline.proposal);
}

void RunCorrect(Options& o) {
  const Corpus corpus = LoadInput(o);
  const std::unique_ptr<Predictor> predictor = MakePredictor(o);
  CorrectionResult result =
      RunCorrection(corpus, *predictor, o.pipeline.correction, nullptr, o.threads);
  const Provenance header = MakeHeader(
      o, Json{{"command", "correct"}, {"correct", CorrectJson(o, !o.predictions.empty())}});
  result.manifest.header = header;
  EnsureParent(o.out);
  WriteManifest(result.manifest, o.out);
  if (!o.trace.empty()) {
    EnsureParent(o.trace);
    WriteTextFile(o.trace, TraceToJsonLines(result.trace, header));
  }
}

void RunPipelineCommand(Options& o) {
  const Corpus corpus = LoadInput(o);
  const std::unique_ptr<Predictor> predictor = MakePredictor(o);
  PipelineResult result = RunPipeline(corpus, o.pipeline, *predictor, o.threads);
  const Provenance header =
      MakeHeader(o, Json{{"command", "pipeline"},
                         {"refine", CleanJson(o)},
                         {"correct", CorrectJson(o, !o.predictions.empty())}});
  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  result.refine.manifest.header = header;
  result.correction.manifest.header = header;
  WriteManifest(result.refine.manifest, dir / "refined.json");
  WriteTextFile(dir / "refine_report.json", RefineReportToJson(result.refine.report, header));
  WriteManifest(result.correction.manifest, dir / "corrected.json");
  WriteTextFile(dir / "trace.jsonl", TraceToJsonLines(result.correction.trace, header));
}

// {"predictions": [{"annotation_id": "...", "boundary_frames": [s, e]}, ...]}
BoundaryMap ReadPredictionFile(const std::string& path, const CorpusManifest& manifest) {
  const VideoIndex index = BuildVideoIndex(manifest);
  std::map<std::string, int, std::less<>> timeline;
  for (const PseudoAnnotation& a : manifest.annotations) {
    timeline[a.annotation_id] = manifest.videos[index.at(a.video_id)].num_frames;
  }
  Json root;
  try {
    root = Json::parse(ReadTextFile(path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kFormat, e.what(), path);
  }
  if (!root.is_object() || !root.contains("predictions") || !root["predictions"].is_array()) {
    throw Error(ErrorCode::kFormat, "expected an object with a \"predictions\" array", path);
  }
  BoundaryMap out;
  for (const Json& p : root["predictions"]) {
    try {
      const std::string id = p.at("annotation_id").get<std::string>();
      const auto frames = p.at("boundary_frames").get<std::vector<int>>();
      const auto it = timeline.find(id);
      if (it == timeline.end()) throw Error(ErrorCode::kReferential, "unknown annotation", id);
      if (frames.size() != 2) throw Error(ErrorCode::kFormat, "boundary_frames needs 2 values", id);
      if (!out.emplace(id, Boundary(frames[0], frames[1], it->second)).second) {
        throw Error(ErrorCode::kReferential, "duplicate prediction", id);
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kFormat, e.what(), path);
    }
  }
  return out;
}

void RunEvaluate(Options& o, std::ostream& out) {
  const CorpusManifest manifest = ReadManifest(o.manifest);
  EvaluationPairs pairs;
  if (o.predictions.empty()) {
    pairs = LabelPairs(manifest);
  } else {
    const VideoIndex index = BuildVideoIndex(manifest);
    for (const PseudoAnnotation& a : manifest.annotations) {
      if (auto gt = GroundTruthFrames(a, manifest.videos[index.at(a.video_id)])) {
        pairs.ground_truth.emplace(a.annotation_id, *gt);
      }
    }
    const BoundaryMap all = ReadPredictionFile(o.predictions, manifest);
    for (const auto& [id, b] : all) {
      if (pairs.ground_truth.contains(id)) pairs.predictions.emplace(id, b);
    }
  }
  const MetricReport report = Evaluate(pairs.predictions, pairs.ground_truth, o.thresholds);
  std::optional<double> corpus_iou;
  if (!manifest.synth_json.empty() && o.predictions.empty()) corpus_iou = CorpusMeanIou(manifest);
  if (o.format == "table") {
    Emit(o, MetricReportToTable(report, corpus_iou), out);
  } else {
    const Provenance header =
        MakeHeader(o, Json{{"command", "evaluate"}, {"thresholds", o.thresholds}});
    Emit(o, MetricReportToJson(report, header, corpus_iou), out);
  }
}

void RunStats(Options& o, std::ostream& out) {
  const CorpusStats stats = ComputeCorpusStats(ReadManifest(o.manifest));
  if (o.format == "table") {
    Emit(o, CorpusStatsToTable(stats), out);
  } else {
    Emit(o, CorpusStatsToJson(stats, MakeHeader(o, Json{{"command", "stats"}})), out);
  }
}

void RunSweep(Options& o, std::ostream& out) {
  std::vector<std::uint64_t> seeds;
  if (o.n_seeds < 1) throw Error(ErrorCode::kConfig, "--seeds must be >= 1");
  for (int i = 0; i < o.n_seeds; ++i) seeds.push_back(o.seed + static_cast<std::uint64_t>(i));
  SweepResult result;
  if (o.knob == "clean_ratio") {
    if (o.values.empty()) o.values = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    result = SweepCleanRatio(o.synth, o.values, seeds, o.pipeline, o.threads);
  } else {
    if (o.values.empty()) o.values = {125, 250, 500, 1000};
    std::vector<int> sizes;
    for (const double v : o.values) {
      if (v < 0 || v != std::floor(v)) {
        throw Error(ErrorCode::kConfig, "corpus sizes must be whole numbers", std::to_string(v));
      }
      sizes.push_back(static_cast<int>(v));
    }
    result = SweepCorpusSize(o.synth, sizes, seeds, o.pipeline, o.threads);
  }
  if (o.format == "table") {
    Emit(o, SweepToTable(result), out);
  } else {
    Json synth = Json::parse(o.synth.ToJson());
    synth.erase("seed");
    const Provenance header = MakeHeader(o, Json{{"command", "sweep"},
                                                 {"knob", o.knob},
                                                 {"values", o.values},
                                                 {"seeds", o.n_seeds},
                                                 {"synth", synth},
                                                 {"refine", CleanJson(o)},
                                                 {"correct", CorrectJson(o, false)}});
    Emit(o, SweepToJson(result, header), out);
  }
}

}  // namespace

std::string ErrorJson(std::string_view code, std::string_view message, std::string_view context) {
  const Json j{{"code", code}, {"message", message}, {"context", context}};
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Pseudo-label refinement for video moment retrieval corpora", kTool};
  app.set_version_flag("--version", MORP_VERSION);
  app.set_config("--config", "", "TOML file; keys go under a [subcommand] table");
  app.require_subcommand(1);

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  Add(synth, "--out", o.out, "output directory")->required();
  AddCommon(synth, o);
  AddSynthFlags(synth, o);

  CLI::App* refine = app.add_subcommand("refine", "clean and adjust raw annotations");
  Add(refine, "--manifest", o.manifest, "input manifest")->required();
  Add(refine, "--out", o.out, "refined manifest path")->required();
  Add(refine, "--report", o.report, "refine report path");
  AddCommon(refine, o);
  AddRefineFlags(refine, o);

  CLI::App* correct = app.add_subcommand("correct", "memory-consensus correction");
  Add(correct, "--manifest", o.manifest, "refined manifest")->required();
  Add(correct, "--out", o.out, "corrected manifest path")->required();
  Add(correct, "--trace", o.trace, "trace path (JSON lines)");
  Add(correct, "--predictions", o.predictions, "recorded predictions (JSON lines)");
  AddCommon(correct, o);
  AddCorrectFlags(correct, o);

  CLI::App* pipeline = app.add_subcommand("pipeline", "refine then correct");
  Add(pipeline, "--manifest", o.manifest, "raw manifest")->required();
  Add(pipeline, "--out", o.out, "output directory")->required();
  Add(pipeline, "--predictions", o.predictions, "recorded predictions (JSON lines)");
  AddCommon(pipeline, o);
  AddRefineFlags(pipeline, o);
  AddCorrectFlags(pipeline, o);

  CLI::App* evaluate = app.add_subcommand("evaluate", "R@m and mIoU against ground truth");
  Add(evaluate, "--manifest", o.manifest, "manifest with ground truth")->required();
  Add(evaluate, "--predictions", o.predictions, "predicted boundaries (JSON)");
  Add(evaluate, "--thresholds", o.thresholds, "IoU thresholds m for R@m")->delimiter(',');
  AddOutputFormat(evaluate, o);
  AddCommon(evaluate, o);

  CLI::App* stats = app.add_subcommand("stats", "corpus statistics");
  Add(stats, "--manifest", o.manifest, "manifest")->required();
  AddOutputFormat(stats, o);
  AddCommon(stats, o);

  CLI::App* sweep = app.add_subcommand("sweep", "metric versus cleaning ratio or corpus size");
  Add(sweep, "--knob", o.knob, "clean_ratio or corpus_size")
      ->check(CLI::IsMember({"clean_ratio", "corpus_size"}));
  Add(sweep, "--values", o.values,
      "knob values (default 0,0.1,...,0.7 or 125,250,500,1000)")
      ->delimiter(',');
  Add(sweep, "--seeds", o.n_seeds, "seeds averaged per point, starting at --seed");
  AddOutputFormat(sweep, o);
  AddCommon(sweep, o);
  AddSynthFlags(sweep, o);
  AddRefineFlags(sweep, o);
  AddCorrectFlags(sweep, o);

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << ErrorJson("usage_error", e.what(), "") << "\n";
    return kExitUsageError;
  }

  try {
    Finalize(o);
    if (synth->parsed()) {
      RunSynth(o);
    } else if (refine->parsed()) {
      RunRefine(o);
    } else if (correct->parsed()) {
      RunCorrect(o);
    } else if (pipeline->parsed()) {
      RunPipelineCommand(o);
    } else if (evaluate->parsed()) {
      RunEvaluate(o, out);
    } else if (stats->parsed()) {
      RunStats(o, out);
    } else if (sweep->parsed()) {
      RunSweep(o, out);
    }
  } catch (const Error& e) {
    err << ErrorJson(ErrorCodeName(e.code()), e.what(), e.context()) << "\n";
    return kExitModuleError;
  } catch (const std::exception& e) {
    err << ErrorJson("internal_error", e.what(), "") << "\n";
    return kExitModuleError;
  }
  return kExitOk;
}

}  // namespace morp::cli
