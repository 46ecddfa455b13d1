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

#include "morp/refine.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "morp/error.h"
#include "morp/parallel.h"

namespace morp {
namespace {

void FillPrefix(SimilarityTrack& track) {
  track.prefix.assign(track.mapped.size() + 1, 0.0);
  for (std::size_t t = 0; t < track.mapped.size(); ++t) {
    track.prefix[t + 1] = track.prefix[t] + track.mapped[t];
  }
}

void CheckTimeline(const SimilarityTrack& track, const Boundary& b) {
  if (b.timeline_len() != track.length()) {
    throw Error(ErrorCode::kContract, "boundary timeline differs from track length",
                b.ToString());
  }
}

}  // namespace

SimilarityTrack FrameSimilarities(std::span<const float> query, const FeatureMatrix& frames) {
  if (static_cast<int>(query.size()) != frames.dim()) {
    throw Error(ErrorCode::kContract, "query and frame feature dimensions differ",
                std::to_string(query.size()) + " vs " + std::to_string(frames.dim()));
  }
  double qq = 0.0;
  for (const float x : query) qq += static_cast<double>(x) * x;
  if (!(qq > 0.0)) throw Error(ErrorCode::kContract, "query feature has zero norm");
  const double qnorm = std::sqrt(qq);

  SimilarityTrack track;
  track.raw.resize(frames.rows());
  track.mapped.resize(frames.rows());
  for (int t = 0; t < frames.rows(); ++t) {
    const auto v = frames.row(t);
    double dot = 0.0;
    double vv = 0.0;
    for (std::size_t d = 0; d < v.size(); ++d) {
      dot += static_cast<double>(query[d]) * v[d];
      vv += static_cast<double>(v[d]) * v[d];
    }
    const double s = std::clamp(dot / (qnorm * std::sqrt(vv)), -1.0, 1.0);
    track.raw[t] = s;
    track.mapped[t] = (s + 1.0) / 2.0;
  }
  FillPrefix(track);
  return track;
}

SimilarityTrack TrackFromMapped(std::vector<double> mapped) {
  if (mapped.empty()) throw Error(ErrorCode::kContract, "empty similarity track");
  SimilarityTrack track;
  track.raw.reserve(mapped.size());
  for (const double m : mapped) {
    if (!(m >= 0.0 && m <= 1.0)) {
      throw Error(ErrorCode::kContract, "mapped similarity outside [0, 1]");
    }
    track.raw.push_back(2.0 * m - 1.0);
  }
  track.mapped = std::move(mapped);
  FillPrefix(track);
  return track;
}

double MomentContrast(const SimilarityTrack& track, const Boundary& b) {
  CheckTimeline(track, b);
  const double inside = track.Sum(b.start(), b.end());
  const double outside = track.Sum(0, b.start()) + track.Sum(b.end(), track.length());
  if (outside < kContrastEpsilon) return kContrastCap;
  return inside / outside;
}

void CleanParams::Validate() const {
  if (!(ratio >= 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::kConfig, "clean ratio must lie in [0, 1)",
                std::to_string(ratio));
  }
}

void AdjustParams::Validate() const {
  if (delta < 1) throw Error(ErrorCode::kConfig, "delta must be >= 1");
  if (!(alpha1 > 0.0 && alpha1 < alpha2)) {
    throw Error(ErrorCode::kConfig, "adjust thresholds need 0 < alpha1 < alpha2");
  }
  if (max_iters < 1) throw Error(ErrorCode::kConfig, "max_iters must be >= 1");
  if (min_len < delta) throw Error(ErrorCode::kConfig, "min_len must be >= delta");
}

std::size_t DropCount(std::size_t n, double ratio) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9));
}

CleanResult CleanCorpus(std::span<const ScoredAnnotation> scored, const CleanParams& params) {
  params.Validate();
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scored[a].gamma != scored[b].gamma) return scored[a].gamma > scored[b].gamma;
    return scored[a].annotation.annotation_id < scored[b].annotation.annotation_id;
  });
  const std::size_t keep = scored.size() - DropCount(scored.size(), params.ratio);
  std::vector<bool> dropped(scored.size(), false);
  for (std::size_t r = keep; r < order.size(); ++r) dropped[order[r]] = true;

  CleanResult result;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    PseudoAnnotation a = scored[i].annotation;
    if (dropped[i]) {
      SetStatus(a, AnnotationStatus::kDropped);
      result.dropped.push_back(std::move(a));
    } else {
      SetStatus(a, AnnotationStatus::kKept);
      result.kept.push_back(std::move(a));
    }
  }
  return result;
}

AdjustOutcome AdjustBoundaryTraced(const SimilarityTrack& track, const Boundary& b,
                                   const AdjustParams& params) {
  params.Validate();
  CheckTimeline(track, b);
  const int t_len = track.length();
  const int d = params.delta;
  int s = b.start();
  int e = b.end();

  for (int iter = 1; iter <= params.max_iters; ++iter) {
    bool moved = false;

    double mu = track.Mean(s, e);
    const int pre = std::max(0, s - d);
    if (pre < s && track.Mean(pre, s) >= params.alpha2 * mu) {
      s = pre;
      moved = true;
    } else if (e - s > params.min_len + d && track.Mean(s, s + d) < params.alpha1 * mu) {
      s += d;
      moved = true;
    }

    mu = track.Mean(s, e);
    const int post = std::min(t_len, e + d);
    if (post > e && track.Mean(e, post) >= params.alpha2 * mu) {
      e = post;
      moved = true;
    } else if (e - s > params.min_len + d && track.Mean(e - d, e) < params.alpha1 * mu) {
      e -= d;
      moved = true;
    }

    if (!moved) return {Boundary(s, e, t_len), iter, true};
  }
  return {Boundary(s, e, t_len), params.max_iters, false};
}

Boundary AdjustBoundary(const SimilarityTrack& track, const Boundary& b,
                        const AdjustParams& params) {
  return AdjustBoundaryTraced(track, b, params).boundary;
}

RefineResult RefineCorpus(const Corpus& corpus, const CleanParams& clean,
                          const AdjustParams& adjust, int threads) {
  clean.Validate();
  adjust.Validate();
  const CorpusManifest& in = corpus.manifest;
  for (const PseudoAnnotation& a : in.annotations) {
    if (a.status != AnnotationStatus::kRaw) {
      throw Error(ErrorCode::kContract, "refinement expects raw annotations",
                  a.annotation_id);
    }
  }
  const VideoIndex index = BuildVideoIndex(in);
  const std::size_t n = in.annotations.size();

  std::vector<std::optional<SimilarityTrack>> tracks(n);
  std::vector<ScoredAnnotation> scored(n);
  ParallelFor(n, threads, [&](std::size_t i) {
    const PseudoAnnotation& a = in.annotations[i];
    const std::size_t v = index.at(a.video_id);
    tracks[i] = FrameSimilarities(corpus.QueryFeature(a), corpus.video_features[v]);
    scored[i] = {a, MomentContrast(*tracks[i], a.boundary_frames)};
  });

  CleanResult cleaned = CleanCorpus(scored, clean);

  // Both clean outputs preserve input order, so a merge restores it.
  RefineResult result;
  result.manifest = in;
  std::vector<const PseudoAnnotation*> by_position(n);
  {
    std::size_t k = 0, dr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool is_kept = k < cleaned.kept.size() &&
                           cleaned.kept[k].annotation_id == in.annotations[i].annotation_id;
      by_position[i] = is_kept ? &cleaned.kept[k++] : &cleaned.dropped[dr++];
    }
  }

  std::vector<RefineRecord> records(n, RefineRecord{"", 0.0, false, Boundary(0, 1, 1), {}});
  ParallelFor(n, threads, [&](std::size_t i) {
    PseudoAnnotation a = *by_position[i];
    RefineRecord rec{a.annotation_id, scored[i].gamma, a.status == AnnotationStatus::kDropped,
                     a.boundary_frames, std::nullopt};
    if (!rec.dropped) {
      const Boundary adjusted = AdjustBoundary(*tracks[i], a.boundary_frames, adjust);
      SetBoundary(a, adjusted, in.videos[index.at(a.video_id)]);
      SetStatus(a, AnnotationStatus::kAdjusted);
      rec.after = adjusted;
    }
    result.manifest.annotations[i] = std::move(a);
    records[i] = std::move(rec);
  });

  std::sort(records.begin(), records.end(),
            [](const RefineRecord& a, const RefineRecord& b) {
              return a.annotation_id < b.annotation_id;
            });
  result.report.records = std::move(records);
  return result;
}

std::string RefineReportToJson(const RefineReport& report,
                               const std::optional<Provenance>& header) {
  using Json = nlohmann::ordered_json;
  Json root;
  if (header) {
    root["header"] = Json{{"tool", header->tool},
                          {"version", header->version},
                          {"config_hash", header->config_hash},
                          {"seed", header->seed}};
  }
  Json records = Json::array();
  for (const RefineRecord& r : report.records) {
    Json j{{"annotation_id", r.annotation_id},
           {"gamma", r.gamma},
           {"decision", r.dropped ? "dropped" : "kept"},
           {"boundary_before_frames", Json::array({r.before.start(), r.before.end()})}};
    j["boundary_after_frames"] =
        r.after ? Json::array({r.after->start(), r.after->end()}) : Json(nullptr);
    records.push_back(std::move(j));
  }
  root["annotations"] = std::move(records);
  return root.dump(2) + "\n";
}

}  // namespace morp
