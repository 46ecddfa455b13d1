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

#include "morp/consensus.h"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "morp/error.h"
#include "morp/parallel.h"
#include "morp/rng.h"

namespace morp {

MemoryBank::MemoryBank(std::string annotation_id, Boundary seed, int capacity)
    : annotation_id_(std::move(annotation_id)), instances_{seed}, capacity_(capacity) {
  if (capacity < 1) {
    throw Error(ErrorCode::kContract, "memory bank capacity must be >= 1", annotation_id_);
  }
}

void MemoryBank::Insert(const Boundary& b) {
  if (b.timeline_len() != instances_.front().timeline_len()) {
    throw Error(ErrorCode::kContract, "inserted boundary is on a different timeline",
                annotation_id_);
  }
  instances_.push_back(b);
  if (instances_.size() > static_cast<std::size_t>(capacity_)) {
    instances_.erase(instances_.begin() + 1);
  }
}

std::vector<double> ConsensusScores(std::span<const Boundary> instances) {
  if (instances.empty()) throw Error(ErrorCode::kContract, "empty memory bank");
  const std::size_t n = instances.size();
  std::vector<double> scores(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != r) scores[r] += Iou(instances[r], instances[k]);
    }
  }
  return scores;
}

ConsensusPick SelectConsensus(std::span<const Boundary> instances) {
  const std::vector<double> scores = ConsensusScores(instances);
  const double best = *std::max_element(scores.begin(), scores.end());
  for (std::size_t r = 0; r < scores.size(); ++r) {
    if (scores[r] >= best - kTieTolerance) return {r, instances[r], scores[r]};
  }
  return {0, instances[0], scores[0]};
}

std::size_t SelectInsert(std::span<const ScoredBoundary> predictions) {
  if (predictions.empty()) throw Error(ErrorCode::kContract, "no predictions to insert");
  double best = predictions[0].confidence;
  for (const ScoredBoundary& p : predictions) best = std::max(best, p.confidence);
  for (std::size_t u = 0; u < predictions.size(); ++u) {
    if (predictions[u].confidence >= best - kTieTolerance) return u;
  }
  return 0;
}

TargetBlend ComposeTargets(const Boundary& consensus, const Boundary& refined, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kContract, "lambda must lie in [0, 1]", std::to_string(lambda));
  }
  return {consensus, lambda, refined, 1.0 - lambda};
}

void CorrectionParams::Validate() const {
  if (epochs < 1) throw Error(ErrorCode::kConfig, "epochs must be >= 1");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kConfig, "lambda must lie in [0, 1]");
  }
  if (capacity < 1) throw Error(ErrorCode::kConfig, "bank capacity must be >= 1");
  if (predictions_per_query < 1) {
    throw Error(ErrorCode::kConfig, "predictions per query must be >= 1");
  }
}

std::uint64_t AnnotationSeed(std::uint64_t seed, std::string_view annotation_id) {
  return MixSeed(seed, HashString(annotation_id));
}

CorrectionResult RunCorrection(const Corpus& corpus, const Predictor& predictor,
                               const CorrectionParams& params, Trainer* trainer,
                               int threads) {
  params.Validate();
  const CorpusManifest& in = corpus.manifest;
  const VideoIndex index = BuildVideoIndex(in);

  // Active annotations, visited in annotation_id order.
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < in.annotations.size(); ++i) {
    const PseudoAnnotation& a = in.annotations[i];
    if (a.status == AnnotationStatus::kAdjusted) {
      active.push_back(i);
    } else if (a.status != AnnotationStatus::kDropped) {
      throw Error(ErrorCode::kContract,
                  "correction expects adjusted or dropped annotations, got " +
                      std::string(StatusName(a.status)),
                  a.annotation_id);
    }
  }
  std::sort(active.begin(), active.end(), [&](std::size_t a, std::size_t b) {
    return in.annotations[a].annotation_id < in.annotations[b].annotation_id;
  });

  const std::size_t n = active.size();
  std::vector<std::optional<SimilarityTrack>> tracks(n);
  std::vector<std::optional<MemoryBank>> banks(n);
  ParallelFor(n, threads, [&](std::size_t j) {
    const PseudoAnnotation& a = in.annotations[active[j]];
    tracks[j] = FrameSimilarities(corpus.QueryFeature(a),
                                  corpus.video_features[index.at(a.video_id)]);
    banks[j].emplace(a.annotation_id, a.boundary_frames, params.capacity);
  });

  CorrectionResult result;
  result.manifest = in;
  result.trace.reserve(n * static_cast<std::size_t>(params.epochs));
  std::vector<std::optional<TraceRecord>> epoch_records(n);

  for (int epoch = 1; epoch <= params.epochs; ++epoch) {
    ParallelFor(n, threads, [&](std::size_t j) {
      const PseudoAnnotation& a = in.annotations[active[j]];
      const std::string ctx = a.annotation_id + " epoch " + std::to_string(epoch);
      const SimilarityTrack& track = *tracks[j];
      std::vector<ScoredBoundary> preds;
      try {
        preds = predictor.Predict({a.annotation_id, track, params.predictions_per_query, epoch,
                                   AnnotationSeed(params.seed, a.annotation_id)});
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kPredictor) throw;
        throw Error(ErrorCode::kPredictor, e.what(), ctx);
      }
      if (preds.empty() || preds.size() > static_cast<std::size_t>(params.predictions_per_query)) {
        throw Error(ErrorCode::kPredictor,
                    "predictor returned " + std::to_string(preds.size()) +
                        " boundaries, expected 1.." +
                        std::to_string(params.predictions_per_query),
                    ctx);
      }
      for (const ScoredBoundary& p : preds) {
        if (p.boundary.timeline_len() != track.length()) {
          throw Error(ErrorCode::kPredictor, "prediction on the wrong timeline", ctx);
        }
        if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) {
          throw Error(ErrorCode::kPredictor, "confidence outside [0, 1]", ctx);
        }
      }
      MemoryBank& bank = *banks[j];
      const std::size_t pick = SelectInsert(preds);
      bank.Insert(preds[pick].boundary);
      const ConsensusPick consensus = SelectConsensus(bank.instances());
      epoch_records[j] = TraceRecord{epoch,
                                     a.annotation_id,
                                     std::move(preds),
                                     pick,
                                     consensus,
                                     bank.size(),
                                     ComposeTargets(consensus.boundary, a.boundary_frames,
                                                    params.lambda)};
    });

    const std::size_t first = result.trace.size();
    for (auto& rec : epoch_records) result.trace.push_back(std::move(*rec));
    if (trainer != nullptr) {
      trainer->OnEpoch(epoch, std::span<const TraceRecord>(result.trace).subspan(first));
    }
  }

  // The last n records are the final epoch, in active order.
  const std::size_t last = result.trace.size() - n;
  for (std::size_t j = 0; j < n; ++j) {
    PseudoAnnotation& a = result.manifest.annotations[active[j]];
    SetBoundary(a, result.trace[last + j].consensus.boundary, in.videos[index.at(a.video_id)]);
    SetStatus(a, AnnotationStatus::kCorrected);
  }
  return result;
}

std::string TraceToJsonLines(std::span<const TraceRecord> trace,
                             const std::optional<Provenance>& header) {
  using Json = nlohmann::ordered_json;
  auto pair = [](const Boundary& b) { return Json::array({b.start(), b.end()}); };
  std::string out;
  if (header) {
    out += Json{{"header", Json{{"tool", header->tool},
                                {"version", header->version},
                                {"config_hash", header->config_hash},
                                {"seed", header->seed}}}}
               .dump();
    out += '\n';
  }
  for (const TraceRecord& r : trace) {
    Json preds = Json::array();
    for (const ScoredBoundary& p : r.predictions) {
      preds.push_back(Json{{"boundary_frames", pair(p.boundary)}, {"confidence", p.confidence}});
    }
    Json j{{"epoch", r.epoch},
           {"annotation_id", r.annotation_id},
           {"inserted", pair(r.predictions[r.inserted_index].boundary)},
           {"inserted_index", r.inserted_index},
           {"consensus", pair(r.consensus.boundary)},
           {"consensus_index", r.consensus.index},
           {"consensus_score", r.consensus.score},
           {"score_vector_length", r.bank_size},
           {"blend", Json{{"consensus_target", pair(r.blend.consensus_target)},
                          {"consensus_weight", r.blend.consensus_weight},
                          {"refined_target", pair(r.blend.refined_target)},
                          {"refined_weight", r.blend.refined_weight}}},
           {"predictions", std::move(preds)}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace morp
