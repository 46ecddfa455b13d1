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

#ifndef MORP_EVAL_H_
#define MORP_EVAL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "morp/boundary.h"
#include "morp/manifest.h"

namespace morp {

using BoundaryMap = std::map<std::string, Boundary, std::less<>>;

// Percentage of queries whose prediction has IoU strictly greater than m.
// Key sets must match and 0 < m < 1.
double RecallAt(const BoundaryMap& predictions, const BoundaryMap& ground_truth, double m);

// 100 * mean IoU; 0 for an empty query set.
double MeanIou(const BoundaryMap& predictions, const BoundaryMap& ground_truth);

struct MetricReport {
  std::vector<std::pair<double, double>> recall_at;  // (m, percentage), m ascending
  double mean_iou = 0.0;
  std::size_t n_queries = 0;
};

MetricReport Evaluate(const BoundaryMap& predictions, const BoundaryMap& ground_truth,
                      std::vector<double> thresholds);

struct EvaluationPairs {
  BoundaryMap predictions;
  BoundaryMap ground_truth;
};

// Current labels against ground truth, for every non-dropped annotation
// that has one.
EvaluationPairs LabelPairs(const CorpusManifest& manifest);

// Mean IoU (as a fraction) over every query of the corpus, where a dropped
// query carries an empty label and a query without ground truth has an
// empty truth. IoU(empty, empty) = 1; IoU(empty, b) = IoU(b, empty) = 0.
// Rejecting a bad annotation therefore earns full credit and dropping a
// good one earns none.
double CorpusMeanIou(const CorpusManifest& manifest);

struct CorpusStats {
  std::size_t video_count = 0;
  double total_duration_hours = 0.0;
  std::size_t query_count = 0;
  std::size_t total_tokens = 0;
  std::size_t vocabulary_size = 0;
};

// Lowercase, whitespace split, leading/trailing punctuation stripped; tokens
// that become empty are discarded.
std::vector<std::string> Tokenize(std::string_view text);

CorpusStats ComputeCorpusStats(const CorpusManifest& manifest);

std::string MetricReportToJson(const MetricReport& report,
                               const std::optional<Provenance>& header,
                               std::optional<double> corpus_mean_iou = std::nullopt);
std::string MetricReportToTable(const MetricReport& report,
                                std::optional<double> corpus_mean_iou = std::nullopt);
std::string CorpusStatsToJson(const CorpusStats& stats, const std::optional<Provenance>& header);
std::string CorpusStatsToTable(const CorpusStats& stats);

}  // namespace morp

#endif  // MORP_EVAL_H_
