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

#include "morp/eval.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "morp/error.h"

namespace morp {
namespace {

void CheckKeys(const BoundaryMap& predictions, const BoundaryMap& ground_truth) {
  const bool same =
      predictions.size() == ground_truth.size() &&
      std::equal(predictions.begin(), predictions.end(), ground_truth.begin(),
                 [](const auto& a, const auto& b) { return a.first == b.first; });
  if (!same) {
    throw Error(ErrorCode::kContract, "prediction and ground-truth query sets differ");
  }
}

nlohmann::ordered_json HeaderJson(const Provenance& p) {
  return {{"tool", p.tool}, {"version", p.version}, {"config_hash", p.config_hash},
          {"seed", p.seed}};
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string Row(const std::string& key, const std::string& value) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-22s %14s\n", key.c_str(), value.c_str());
  return buf;
}

}  // namespace

double RecallAt(const BoundaryMap& predictions, const BoundaryMap& ground_truth, double m) {
  CheckKeys(predictions, ground_truth);
  if (!(m > 0.0 && m < 1.0)) {
    throw Error(ErrorCode::kContract, "recall threshold must lie in (0, 1)", std::to_string(m));
  }
  if (ground_truth.empty()) return 0.0;
  std::size_t hits = 0;
  auto g = ground_truth.begin();
  for (auto p = predictions.begin(); p != predictions.end(); ++p, ++g) {
    if (Iou(p->second, g->second) > m) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(ground_truth.size());
}

double MeanIou(const BoundaryMap& predictions, const BoundaryMap& ground_truth) {
  CheckKeys(predictions, ground_truth);
  if (ground_truth.empty()) return 0.0;
  double sum = 0.0;
  auto g = ground_truth.begin();
  for (auto p = predictions.begin(); p != predictions.end(); ++p, ++g) {
    sum += Iou(p->second, g->second);
  }
  return 100.0 * sum / static_cast<double>(ground_truth.size());
}

MetricReport Evaluate(const BoundaryMap& predictions, const BoundaryMap& ground_truth,
                      std::vector<double> thresholds) {
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  MetricReport report;
  for (const double m : thresholds) {
    report.recall_at.emplace_back(m, RecallAt(predictions, ground_truth, m));
  }
  report.mean_iou = MeanIou(predictions, ground_truth);
  report.n_queries = ground_truth.size();
  return report;
}

EvaluationPairs LabelPairs(const CorpusManifest& manifest) {
  const VideoIndex index = BuildVideoIndex(manifest);
  EvaluationPairs pairs;
  for (const PseudoAnnotation& a : manifest.annotations) {
    if (a.status == AnnotationStatus::kDropped || !a.gt_boundary_seconds) continue;
    const VideoEntry& v = manifest.videos[index.at(a.video_id)];
    pairs.predictions.emplace(a.annotation_id, a.boundary_frames);
    pairs.ground_truth.emplace(a.annotation_id, *GroundTruthFrames(a, v));
  }
  return pairs;
}

double CorpusMeanIou(const CorpusManifest& manifest) {
  if (manifest.annotations.empty()) return 0.0;
  const VideoIndex index = BuildVideoIndex(manifest);
  double sum = 0.0;
  for (const PseudoAnnotation& a : manifest.annotations) {
    const bool has_label = a.status != AnnotationStatus::kDropped;
    const std::optional<Boundary> gt =
        GroundTruthFrames(a, manifest.videos[index.at(a.video_id)]);
    if (has_label && gt) {
      sum += Iou(a.boundary_frames, *gt);
    } else if (!has_label && !gt) {
      sum += 1.0;
    }
  }
  return sum / static_cast<double>(manifest.annotations.size());
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) {
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(word[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(word[e - 1]))) --e;
    if (b == e) continue;
    std::string token = word.substr(b, e - b);
    for (char& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    tokens.push_back(std::move(token));
  }
  return tokens;
}

CorpusStats ComputeCorpusStats(const CorpusManifest& manifest) {
  CorpusStats stats;
  stats.video_count = manifest.videos.size();
  double seconds = 0.0;
  for (const VideoEntry& v : manifest.videos) seconds += v.duration_seconds;
  stats.total_duration_hours = seconds / 3600.0;
  stats.query_count = manifest.annotations.size();
  std::set<std::string> vocabulary;
  for (const PseudoAnnotation& a : manifest.annotations) {
    for (std::string& token : Tokenize(a.query_text)) {
      ++stats.total_tokens;
      vocabulary.insert(std::move(token));
    }
  }
  stats.vocabulary_size = vocabulary.size();
  return stats;
}

std::string MetricReportToJson(const MetricReport& report,
                               const std::optional<Provenance>& header,
                               std::optional<double> corpus_mean_iou) {
  nlohmann::ordered_json root;
  if (header) root["header"] = HeaderJson(*header);
  nlohmann::ordered_json recall = nlohmann::ordered_json::object();
  for (const auto& [m, pct] : report.recall_at) recall[Fixed(m, 2)] = pct;
  root["recall_at"] = std::move(recall);
  root["mean_iou"] = report.mean_iou;
  root["n_queries"] = report.n_queries;
  if (corpus_mean_iou) root["corpus_mean_iou"] = *corpus_mean_iou;
  return root.dump(2) + "\n";
}

std::string MetricReportToTable(const MetricReport& report,
                                std::optional<double> corpus_mean_iou) {
  std::string out = Row("metric", "value");
  for (const auto& [m, pct] : report.recall_at) out += Row("R@" + Fixed(m, 2), Fixed(pct, 2));
  out += Row("mIoU", Fixed(report.mean_iou, 2));
  out += Row("queries", std::to_string(report.n_queries));
  if (corpus_mean_iou) out += Row("corpus mIoU", Fixed(100.0 * *corpus_mean_iou, 2));
  return out;
}

std::string CorpusStatsToJson(const CorpusStats& stats, const std::optional<Provenance>& header) {
  nlohmann::ordered_json root;
  if (header) root["header"] = HeaderJson(*header);
  root["video_count"] = stats.video_count;
  root["total_duration_hours"] = stats.total_duration_hours;
  root["query_count"] = stats.query_count;
  root["total_tokens"] = stats.total_tokens;
  root["vocabulary_size"] = stats.vocabulary_size;
  return root.dump(2) + "\n";
}

std::string CorpusStatsToTable(const CorpusStats& stats) {
  std::string out = Row("statistic", "value");
  out += Row("videos", std::to_string(stats.video_count));
  out += Row("duration (hours)", Fixed(stats.total_duration_hours, 2));
  out += Row("queries", std::to_string(stats.query_count));
  out += Row("tokens", std::to_string(stats.total_tokens));
  out += Row("vocabulary", std::to_string(stats.vocabulary_size));
  return out;
}

}  // namespace morp
