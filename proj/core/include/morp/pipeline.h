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

// End-to-end refine + correct, and the knob sweeps built on it.

#ifndef MORP_PIPELINE_H_
#define MORP_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "morp/consensus.h"
#include "morp/predictor.h"
#include "morp/refine.h"
#include "morp/synth.h"

namespace morp {

struct PipelineConfig {
  CleanParams clean;
  AdjustParams adjust;
  CorrectionParams correction;
  ProposalParams proposal;

  void Validate() const;
};

struct PipelineResult {
  RefineResult refine;
  CorrectionResult correction;
};

PipelineResult RunPipeline(const Corpus& corpus, const PipelineConfig& config,
                           const Predictor& predictor, int threads = 1);
// Uses ReferencePredictor(config.proposal).
PipelineResult RunPipeline(const Corpus& corpus, const PipelineConfig& config, int threads = 1);

enum class SweepKnob { kCleanRatio, kCorpusSize };

std::string_view SweepKnobName(SweepKnob knob);

struct SweepPoint {
  double value;
  // Seed averages of CorpusMeanIou and of label mean IoU (fractions).
  double corpus_mean_iou;
  double label_mean_iou;
  std::vector<double> per_seed_corpus_mean_iou;
};

struct SweepResult {
  SweepKnob knob;
  std::vector<std::uint64_t> seeds;
  std::vector<SweepPoint> points;
};

// For each seed, a corpus is generated from `base` with that seed and the
// pipeline runs once per knob value with correction.seed set to the same
// seed. Clean-ratio sweeps reuse one corpus per seed; corpus-size sweeps
// override n_videos.
SweepResult SweepCleanRatio(const SynthSpec& base, std::span<const double> ratios,
                            std::span<const std::uint64_t> seeds, const PipelineConfig& config,
                            int threads = 1);
SweepResult SweepCorpusSize(const SynthSpec& base, std::span<const int> sizes,
                            std::span<const std::uint64_t> seeds, const PipelineConfig& config,
                            int threads = 1);

std::string SweepToJson(const SweepResult& result, const std::optional<Provenance>& header);
std::string SweepToTable(const SweepResult& result);

}  // namespace morp

#endif  // MORP_PIPELINE_H_
