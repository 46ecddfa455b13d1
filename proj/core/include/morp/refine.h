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

// Semantics-guided refinement of pseudo labels: per-frame query relevance,
// the moment contrastive score, low-score cleaning and iterative boundary
// adjustment.

#ifndef MORP_REFINE_H_
#define MORP_REFINE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "morp/boundary.h"
#include "morp/featstore.h"
#include "morp/manifest.h"

namespace morp {

// Query relevance of every frame. `raw` holds cosine similarities in
// [-1, 1]; `mapped` is (raw + 1) / 2; `prefix[t]` sums mapped[0, t).
struct SimilarityTrack {
  std::vector<double> raw;
  std::vector<double> mapped;
  std::vector<double> prefix;

  int length() const { return static_cast<int>(mapped.size()); }
  // Sum of mapped over [begin, end).
  double Sum(int begin, int end) const { return prefix[end] - prefix[begin]; }
  double Mean(int begin, int end) const { return Sum(begin, end) / (end - begin); }
};

SimilarityTrack FrameSimilarities(std::span<const float> query, const FeatureMatrix& frames);

// Builds a track directly from [0, 1] relevance values. Throws kContract on
// an empty input or a value outside [0, 1].
SimilarityTrack TrackFromMapped(std::vector<double> mapped);

inline constexpr double kContrastEpsilon = 1e-8;
inline constexpr double kContrastCap = 1e6;

// Mapped relevance inside `b` divided by mapped relevance outside it, or
// kContrastCap when the outside mass is below kContrastEpsilon.
double MomentContrast(const SimilarityTrack& track, const Boundary& b);

struct CleanParams {
  double ratio = 0.40;

  void Validate() const;
};

struct AdjustParams {
  int delta = 5;
  double alpha1 = 0.22;
  double alpha2 = 0.92;
  int max_iters = 64;
  int min_len = 5;

  void Validate() const;
};

struct ScoredAnnotation {
  PseudoAnnotation annotation;
  double gamma;
};

struct CleanResult {
  std::vector<PseudoAnnotation> kept;
  std::vector<PseudoAnnotation> dropped;
};

// floor(n * ratio), robust to representation error in ratio.
std::size_t DropCount(std::size_t n, double ratio);

// Ranks by gamma descending (ties: annotation_id ascending) and drops the
// DropCount lowest-ranked. Both outputs keep input order and carry the
// kept/dropped status.
CleanResult CleanCorpus(std::span<const ScoredAnnotation> scored, const CleanParams& params);

struct AdjustOutcome {
  Boundary boundary;
  int iterations;
  // True when an iteration moved neither side before max_iters ran out.
  bool converged;
};

// Moves each side of `b` by `delta` frames until nothing moves. Per
// iteration, with mu the mean mapped relevance inside the current boundary:
//
//   start: expand to max(0, s - delta) if the window [s - delta, s) is
//          nonempty and its mean >= alpha2 * mu; otherwise shrink to
//          s + delta if e - s > min_len + delta and mean [s, s + delta)
//          < alpha1 * mu.
//   end:   the mirror image with [e, e + delta) and [e - delta, e), using
//          mu recomputed after the start side moved.
AdjustOutcome AdjustBoundaryTraced(const SimilarityTrack& track, const Boundary& b,
                                   const AdjustParams& params);
Boundary AdjustBoundary(const SimilarityTrack& track, const Boundary& b,
                        const AdjustParams& params);

struct RefineRecord {
  std::string annotation_id;
  double gamma;
  bool dropped;
  Boundary before;
  std::optional<Boundary> after;
};

// Records sorted by annotation_id.
struct RefineReport {
  std::vector<RefineRecord> records;
};

struct RefineResult {
  CorpusManifest manifest;
  RefineReport report;
};

// Scores every raw annotation, cleans, and adjusts the kept ones. The
// output manifest keeps dropped annotations (status dropped) in place; kept
// ones come back adjusted.
RefineResult RefineCorpus(const Corpus& corpus, const CleanParams& clean,
                          const AdjustParams& adjust, int threads = 1);

std::string RefineReportToJson(const RefineReport& report,
                               const std::optional<Provenance>& header);

}  // namespace morp

#endif  // MORP_REFINE_H_
