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

// Memory-consensus correction. Each kept annotation owns a memory bank of
// candidate boundaries seeded with its refined boundary; every epoch the
// predictor's most confident proposal is inserted, and the instance that
// agrees most (by summed IoU) with the rest of the bank becomes the
// corrected label.

#ifndef MORP_CONSENSUS_H_
#define MORP_CONSENSUS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "morp/boundary.h"
#include "morp/manifest.h"
#include "morp/predictor.h"

namespace morp {

// Scores within this distance of the maximum count as ties.
inline constexpr double kTieTolerance = 1e-12;

class MemoryBank {
 public:
  MemoryBank(std::string annotation_id, Boundary seed, int capacity);

  // Appends; past capacity the oldest instance after the seed is evicted.
  void Insert(const Boundary& b);

  const std::string& annotation_id() const { return annotation_id_; }
  std::span<const Boundary> instances() const { return instances_; }
  int capacity() const { return capacity_; }
  std::size_t size() const { return instances_.size(); }

 private:
  std::string annotation_id_;
  std::vector<Boundary> instances_;
  int capacity_;
};

// c_r = sum over k != r of IoU(m_r, m_k).
std::vector<double> ConsensusScores(std::span<const Boundary> instances);

struct ConsensusPick {
  std::size_t index;
  Boundary boundary;
  double score;
};

// Highest consensus; ties go to the earliest instance.
ConsensusPick SelectConsensus(std::span<const Boundary> instances);

// Index of the most confident prediction; ties go to the earliest.
std::size_t SelectInsert(std::span<const ScoredBoundary> predictions);

// The two weighted targets a trainer fits each epoch.
struct TargetBlend {
  Boundary consensus_target;
  double consensus_weight;
  Boundary refined_target;
  double refined_weight;
};

TargetBlend ComposeTargets(const Boundary& consensus, const Boundary& refined, double lambda);

struct CorrectionParams {
  int epochs = 15;
  double lambda = 0.7;
  int capacity = 32;
  int predictions_per_query = 5;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct TraceRecord {
  int epoch;
  std::string annotation_id;
  std::vector<ScoredBoundary> predictions;
  std::size_t inserted_index;
  ConsensusPick consensus;
  std::size_t bank_size;
  TargetBlend blend;
};

// Receives each epoch's targets, in annotation_id order, after every
// annotation has been processed for that epoch.
class Trainer {
 public:
  virtual ~Trainer() = default;
  virtual void OnEpoch(int epoch, std::span<const TraceRecord> records) = 0;
};

class NoOpTrainer : public Trainer {
 public:
  void OnEpoch(int, std::span<const TraceRecord>) override {}
};

struct CorrectionResult {
  CorpusManifest manifest;
  // Ordered by (epoch, annotation_id).
  std::vector<TraceRecord> trace;
};

// Seed handed to the predictor for one annotation.
std::uint64_t AnnotationSeed(std::uint64_t seed, std::string_view annotation_id);

// Runs `params.epochs` rounds over every adjusted annotation; dropped
// annotations pass through untouched. The corrected boundary is the
// final epoch's consensus pick.
CorrectionResult RunCorrection(const Corpus& corpus, const Predictor& predictor,
                               const CorrectionParams& params, Trainer* trainer = nullptr,
                               int threads = 1);

// JSON lines: an optional header line, then one record per trace entry.
std::string TraceToJsonLines(std::span<const TraceRecord> trace,
                             const std::optional<Provenance>& header);

}  // namespace morp

#endif  // MORP_CONSENSUS_H_
