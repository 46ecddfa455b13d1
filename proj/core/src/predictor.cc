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

#include "morp/predictor.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "morp/error.h"
#include "morp/manifest.h"
#include "morp/rng.h"

namespace morp {

void ProposalParams::Validate() const {
  if (window_fractions.empty()) throw Error(ErrorCode::kConfig, "no window fractions");
  for (std::size_t i = 0; i < window_fractions.size(); ++i) {
    const double f = window_fractions[i];
    if (!(f > 0.0 && f <= 1.0)) {
      throw Error(ErrorCode::kConfig, "window fractions must lie in (0, 1]");
    }
    if (i > 0 && f <= window_fractions[i - 1]) {
      throw Error(ErrorCode::kConfig, "window fractions must be strictly ascending");
    }
  }
  if (stride < 1) throw Error(ErrorCode::kConfig, "proposal stride must be >= 1");
  if (jitter < 0) throw Error(ErrorCode::kConfig, "proposal jitter must be >= 0");
  if (!(nms_iou >= 0.0 && nms_iou <= 1.0)) {
    throw Error(ErrorCode::kConfig, "nms_iou must lie in [0, 1]");
  }
}

double WindowScore(const SimilarityTrack& track, const Boundary& window) {
  const int t = track.length();
  const int n = window.length();
  if (n >= t) return 0.0;
  const double mean_in = track.Mean(window.start(), window.end());
  const double mean_out =
      (track.Sum(0, window.start()) + track.Sum(window.end(), t)) / (t - n);
  return (mean_in - mean_out) *
         std::sqrt(static_cast<double>(n) * (t - n) / static_cast<double>(t));
}

std::vector<ScoredBoundary> Propose(const SimilarityTrack& track, int count, int epoch,
                                    std::uint64_t seed, const ProposalParams& params) {
  params.Validate();
  if (count < 1) throw Error(ErrorCode::kContract, "proposal count must be >= 1");
  const int t = track.length();

  struct Candidate {
    Boundary window;
    double score;
  };
  std::vector<Candidate> candidates;
  Rng rng(MixSeed(seed, static_cast<std::uint64_t>(epoch)));
  for (const double f : params.window_fractions) {
    const int len = static_cast<int>(std::floor(f * t));
    if (len < 1) continue;
    for (int o = 0; o + len <= t; o += params.stride) {
      std::int64_t start = o;
      std::int64_t end = o + len;
      if (params.jitter > 0) {
        start += rng.UniformInt(-params.jitter, params.jitter);
        end += rng.UniformInt(-params.jitter, params.jitter);
      }
      start = std::clamp<std::int64_t>(start, 0, t);
      end = std::clamp<std::int64_t>(end, 0, t);
      if (end <= start) continue;
      const Boundary w(static_cast<int>(start), static_cast<int>(end), t);
      candidates.push_back({w, WindowScore(track, w)});
    }
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::kNoCandidates,
                "track of " + std::to_string(t) + " frames is too short for every window");
  }

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].score > candidates[b].score;
  });

  std::vector<const Candidate*> kept;
  for (const std::size_t i : order) {
    const Candidate& c = candidates[i];
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Candidate* k) {
      return Iou(k->window, c.window) > params.nms_iou;
    });
    if (!suppressed) kept.push_back(&c);
  }

  // Softmax, shifted by the top score for stability.
  const double top = kept.front()->score;
  double z = 0.0;
  for (const Candidate* c : kept) z += std::exp(c->score - top);
  const std::size_t n_out = std::min<std::size_t>(static_cast<std::size_t>(count), kept.size());
  std::vector<ScoredBoundary> out;
  out.reserve(n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    out.push_back({kept[i]->window, std::exp(kept[i]->score - top) / z});
  }
  return out;
}

ReferencePredictor::ReferencePredictor(ProposalParams params) : params_(std::move(params)) {
  params_.Validate();
}

std::vector<ScoredBoundary> ReferencePredictor::Predict(const PredictionRequest& request) const {
  return Propose(request.track, request.count, request.epoch, request.seed, params_);
}

void RecordedPredictor::Add(int epoch, std::string annotation_id,
                            std::vector<RawPrediction> predictions) {
  records_[{epoch, std::move(annotation_id)}] = std::move(predictions);
}

RecordedPredictor RecordedPredictor::FromJsonLines(std::string_view text) {
  using Json = nlohmann::json;
  RecordedPredictor predictor;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string ctx = "predictions line " + std::to_string(line_no);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error&) {
      throw Error(ErrorCode::kFormat, "prediction line is not valid JSON", ctx);
    }
    if (j.is_object() && j.contains("header")) continue;
    try {
      const int epoch = j.at("epoch").get<int>();
      std::string id = j.at("annotation_id").get<std::string>();
      std::vector<RawPrediction> preds;
      for (const Json& p : j.at("predictions")) {
        const Json& b = p.at("boundary_frames");
        if (!b.is_array() || b.size() != 2) throw Error(ErrorCode::kFormat, "bad boundary", ctx);
        preds.push_back({b[0].get<int>(), b[1].get<int>(), p.at("confidence").get<double>()});
      }
      predictor.Add(epoch, std::move(id), std::move(preds));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kFormat, std::string("malformed prediction record: ") + e.what(),
                  ctx);
    }
  }
  return predictor;
}

RecordedPredictor RecordedPredictor::FromFile(const std::filesystem::path& path) {
  return FromJsonLines(ReadTextFile(path));
}

std::vector<ScoredBoundary> RecordedPredictor::Predict(const PredictionRequest& request) const {
  const auto it = records_.find(std::make_pair(request.epoch, std::string(request.annotation_id)));
  const std::string ctx =
      std::string(request.annotation_id) + " epoch " + std::to_string(request.epoch);
  if (it == records_.end()) {
    throw Error(ErrorCode::kPredictor, "no recorded predictions", ctx);
  }
  std::vector<ScoredBoundary> out;
  for (const RawPrediction& p : it->second) {
    if (!(0 <= p.start && p.start < p.end && p.end <= request.track.length())) {
      throw Error(ErrorCode::kPredictor, "recorded boundary is invalid on the timeline", ctx);
    }
    out.push_back({Boundary(p.start, p.end, request.track.length()), p.confidence});
  }
  return out;
}

}  // namespace morp
