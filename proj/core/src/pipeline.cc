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

#include "morp/pipeline.h"

#include <cstdio>

#include "json.hpp"
#include "morp/error.h"
#include "morp/eval.h"

namespace morp {
namespace {

double LabelMeanIou(const CorpusManifest& manifest) {
  const EvaluationPairs pairs = LabelPairs(manifest);
  if (pairs.ground_truth.empty()) return 0.0;
  return MeanIou(pairs.predictions, pairs.ground_truth) / 100.0;
}

void Accumulate(SweepPoint& point, const CorpusManifest& corrected, std::size_t n_seeds) {
  const double corpus = CorpusMeanIou(corrected);
  point.per_seed_corpus_mean_iou.push_back(corpus);
  point.corpus_mean_iou += corpus / static_cast<double>(n_seeds);
  point.label_mean_iou += LabelMeanIou(corrected) / static_cast<double>(n_seeds);
}

void CheckSeeds(std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw Error(ErrorCode::kConfig, "sweep needs at least one seed");
}

}  // namespace

void PipelineConfig::Validate() const {
  clean.Validate();
  adjust.Validate();
  correction.Validate();
  proposal.Validate();
}

PipelineResult RunPipeline(const Corpus& corpus, const PipelineConfig& config,
                           const Predictor& predictor, int threads) {
  config.Validate();
  PipelineResult result;
  result.refine = RefineCorpus(corpus, config.clean, config.adjust, threads);
  Corpus refined{result.refine.manifest, corpus.video_features, corpus.queries};
  result.correction = RunCorrection(refined, predictor, config.correction, nullptr, threads);
  return result;
}

PipelineResult RunPipeline(const Corpus& corpus, const PipelineConfig& config, int threads) {
  const ReferencePredictor predictor(config.proposal);
  return RunPipeline(corpus, config, predictor, threads);
}

std::string_view SweepKnobName(SweepKnob knob) {
  return knob == SweepKnob::kCleanRatio ? "clean_ratio" : "corpus_size";
}

SweepResult SweepCleanRatio(const SynthSpec& base, std::span<const double> ratios,
                            std::span<const std::uint64_t> seeds, const PipelineConfig& config,
                            int threads) {
  CheckSeeds(seeds);
  SweepResult result{SweepKnob::kCleanRatio, {seeds.begin(), seeds.end()}, {}};
  for (const double r : ratios) result.points.push_back({r, 0.0, 0.0, {}});
  for (const std::uint64_t seed : seeds) {
    SynthSpec spec = base;
    spec.seed = seed;
    const Corpus corpus = GenerateCorpus(spec, threads);
    for (SweepPoint& point : result.points) {
      PipelineConfig c = config;
      c.clean.ratio = point.value;
      c.correction.seed = seed;
      Accumulate(point, RunPipeline(corpus, c, threads).correction.manifest, seeds.size());
    }
  }
  return result;
}

SweepResult SweepCorpusSize(const SynthSpec& base, std::span<const int> sizes,
                            std::span<const std::uint64_t> seeds, const PipelineConfig& config,
                            int threads) {
  CheckSeeds(seeds);
  SweepResult result{SweepKnob::kCorpusSize, {seeds.begin(), seeds.end()}, {}};
  for (const int n : sizes) {
    SweepPoint point{static_cast<double>(n), 0.0, 0.0, {}};
    for (const std::uint64_t seed : seeds) {
      SynthSpec spec = base;
      spec.seed = seed;
      spec.n_videos = n;
      PipelineConfig c = config;
      c.correction.seed = seed;
      Accumulate(point, RunPipeline(GenerateCorpus(spec, threads), c, threads).correction.manifest,
                 seeds.size());
    }
    result.points.push_back(std::move(point));
  }
  return result;
}

std::string SweepToJson(const SweepResult& result, const std::optional<Provenance>& header) {
  nlohmann::ordered_json j;
  if (header) {
    j["header"] = {{"tool", header->tool},
                   {"version", header->version},
                   {"config_hash", header->config_hash},
                   {"seed", header->seed}};
  }
  j["knob"] = SweepKnobName(result.knob);
  j["seeds"] = result.seeds;
  auto points = nlohmann::ordered_json::array();
  for (const SweepPoint& p : result.points) {
    points.push_back({{"value", p.value},
                      {"corpus_mean_iou", p.corpus_mean_iou},
                      {"label_mean_iou", p.label_mean_iou},
                      {"per_seed_corpus_mean_iou", p.per_seed_corpus_mean_iou}});
  }
  j["points"] = std::move(points);
  return j.dump(2) + "\n";
}

std::string SweepToTable(const SweepResult& result) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-12s %16s %16s\n", std::string(SweepKnobName(result.knob)).c_str(),
                "corpus_mean_iou", "label_mean_iou");
  out += line;
  for (const SweepPoint& p : result.points) {
    std::snprintf(line, sizeof(line), "%-12g %16.4f %16.4f\n", p.value, p.corpus_mean_iou,
                  p.label_mean_iou);
    out += line;
  }
  return out;
}

}  // namespace morp
