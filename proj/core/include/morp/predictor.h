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

// Proposal predictors consumed by memory-consensus correction.

#ifndef MORP_PREDICTOR_H_
#define MORP_PREDICTOR_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "morp/boundary.h"
#include "morp/refine.h"

namespace morp {

struct PredictionRequest {
  std::string_view annotation_id;
  const SimilarityTrack& track;
  int count;        // U
  int epoch;        // 1-based
  std::uint64_t seed;
};

// Contract: Predict returns between 1 and `count` scored boundaries, each
// valid on the track's timeline with confidence in [0, 1], and is a pure
// function of the request. Implementations must be safe to call
// concurrently.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::vector<ScoredBoundary> Predict(const PredictionRequest& request) const = 0;
};

struct ProposalParams {
  std::vector<double> window_fractions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  int stride = 5;
  double nms_iou = 0.5;
  int jitter = 5;

  void Validate() const;
};

// Score of a candidate window: the two-sample scan statistic
// (mean_in - mean_out) * sqrt(n (T - n) / T) over mapped relevance. Zero
// for the full span.
double WindowScore(const SimilarityTrack& track, const Boundary& window);

// Sliding-window proposals. For every fraction f (window length
// floor(f * T), skipped when < 1) and offset o = 0, stride, 2*stride, ...
// with o + length <= T, the window [o + js, o + length + je) is clipped to
// the timeline, where js and je are drawn in enumeration order from
// Rng(MixSeed(seed, epoch)) as UniformInt(-jitter, jitter) (no draws when
// jitter is 0). Windows are ranked by WindowScore (ties: enumeration
// index), greedily suppressed when IoU with a kept window exceeds nms_iou,
// and the survivors' scores are softmaxed into confidences. Returns the
// top min(count, survivors) by confidence. Throws kNoCandidates when no
// fraction yields a window.
std::vector<ScoredBoundary> Propose(const SimilarityTrack& track, int count, int epoch,
                                    std::uint64_t seed, const ProposalParams& params);

// Deterministic stand-in for a trained retrieval model.
class ReferencePredictor : public Predictor {
 public:
  explicit ReferencePredictor(ProposalParams params = {});
  std::vector<ScoredBoundary> Predict(const PredictionRequest& request) const override;

 private:
  ProposalParams params_;
};

// Replays predictions exported by an external model. One JSON object per
// line:
//
//   {"epoch": 1, "annotation_id": "a0",
//    "predictions": [{"boundary_frames": [s, e], "confidence": 0.8}, ...]}
//
// Lines whose first key is "header" are skipped. Boundaries are checked
// against the track at Predict time; a missing (epoch, annotation) pair is
// a kPredictor error.
class RecordedPredictor : public Predictor {
 public:
  using Key = std::pair<int, std::string>;
  struct RawPrediction {
    int start;
    int end;
    double confidence;
  };

  static RecordedPredictor FromJsonLines(std::string_view text);
  static RecordedPredictor FromFile(const std::filesystem::path& path);

  void Add(int epoch, std::string annotation_id, std::vector<RawPrediction> predictions);
  std::vector<ScoredBoundary> Predict(const PredictionRequest& request) const override;

 private:
  std::map<Key, std::vector<RawPrediction>, std::less<>> records_;
};

}  // namespace morp

#endif  // MORP_PREDICTOR_H_
