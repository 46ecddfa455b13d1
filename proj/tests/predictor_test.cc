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

#include <gtest/gtest.h>

#include <random>

#include "morp/error.h"
#include "support/oracles.h"

namespace morp {
namespace {

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no morp::Error thrown";
  return ErrorCode::kContract;
}

SimilarityTrack RandomTrack(std::mt19937_64& gen, int t) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> m(t);
  for (double& x : m) x = u(gen);
  return TrackFromMapped(std::move(m));
}

TEST(ProposeTest, FindsIsolatedSupport) {
  std::vector<double> m(50, 0.0);
  for (int i = 10; i < 20; ++i) m[i] = 1.0;
  const SimilarityTrack track = TrackFromMapped(m);
  ProposalParams p;
  p.jitter = 0;
  const auto out = Propose(track, 5, 1, 0, p);
  ASSERT_FALSE(out.empty());
  EXPECT_EQ(out[0].boundary, Boundary(10, 20, 50));

  // Among same-length windows the support scores highest, and its gamma
  // (checked by direct summation) is also the largest at that length.
  double best_gamma = 0.0;
  for (int o = 0; o + 10 <= 50; o += 5) {
    best_gamma = std::max(best_gamma, oracle::Gamma(m, {o, o + 10}));
    EXPECT_LE(WindowScore(track, {o, o + 10, 50}), WindowScore(track, {10, 20, 50}));
  }
  EXPECT_EQ(best_gamma, oracle::Gamma(m, {10, 20}));
}

TEST(ProposeTest, UniformTrackGivesEqualConfidences) {
  const SimilarityTrack track = TrackFromMapped(std::vector<double>(64, 0.5));
  const auto out = Propose(track, 5, 3, 11, {});
  ASSERT_GE(out.size(), 2u);
  for (const auto& s : out) EXPECT_DOUBLE_EQ(s.confidence, out[0].confidence);
  EXPECT_EQ(WindowScore(track, {3, 30, 64}), 0.0);
  EXPECT_EQ(WindowScore(track, {0, 64, 64}), 0.0);
}

TEST(ProposeTest, DeterministicAndWellFormed) {
  std::mt19937_64 gen(51);
  for (int i = 0; i < 300; ++i) {
    const int t = std::uniform_int_distribution<int>(10, 300)(gen);
    const SimilarityTrack track = RandomTrack(gen, t);
    const int count = 1 + static_cast<int>(gen() % 8);
    const int epoch = 1 + static_cast<int>(gen() % 15);
    ProposalParams p;
    p.nms_iou = std::uniform_real_distribution<double>(0.1, 0.9)(gen);
    const std::uint64_t seed = gen();
    const auto out = Propose(track, count, epoch, seed, p);
    EXPECT_EQ(Propose(track, count, epoch, seed, p), out);
    ASSERT_GE(out.size(), 1u);
    ASSERT_LE(out.size(), static_cast<std::size_t>(count));
    double total = 0.0;
    for (std::size_t a = 0; a < out.size(); ++a) {
      EXPECT_EQ(out[a].boundary.timeline_len(), t);
      EXPECT_GT(out[a].confidence, 0.0);
      EXPECT_LE(out[a].confidence, 1.0);
      total += out[a].confidence;
      for (std::size_t b = a + 1; b < out.size(); ++b) {
        EXPECT_LE(Iou(out[a].boundary, out[b].boundary), p.nms_iou);
      }
      if (a > 0) EXPECT_LE(out[a].confidence, out[a - 1].confidence);
    }
    EXPECT_LE(total, 1.0 + 1e-12);
  }
  const SimilarityTrack track = RandomTrack(gen, 80);
  EXPECT_EQ(Propose(track, 5, 2, 99, {}), Propose(track, 5, 2, 99, {}));
}

TEST(ProposeTest, ZeroJitterIsEpochInvariant) {
  std::mt19937_64 gen(53);
  ProposalParams p;
  p.jitter = 0;
  for (int i = 0; i < 50; ++i) {
    const SimilarityTrack track = RandomTrack(gen, 40 + static_cast<int>(gen() % 100));
    EXPECT_EQ(Propose(track, 5, 1, 7, p), Propose(track, 5, 9, 7, p));
  }
  const SimilarityTrack track = RandomTrack(gen, 128);
  bool differs = false;
  for (int e = 2; e < 10 && !differs; ++e) {
    differs = Propose(track, 5, 1, 7, {}) != Propose(track, 5, e, 7, {});
  }
  EXPECT_TRUE(differs);
}

TEST(ProposeTest, RaisingTopWindowCannotDemoteItBelowUnaffectedWindows) {
  std::mt19937_64 gen(57);
  ProposalParams p;
  p.jitter = 0;
  for (int i = 0; i < 200; ++i) {
    const int t = 30 + static_cast<int>(gen() % 80);
    const SimilarityTrack track = RandomTrack(gen, t);
    const Boundary top = Propose(track, 1, 1, 0, p)[0].boundary;
    std::vector<double> bumped = track.mapped;
    const int f = top.start() + static_cast<int>(gen() % top.length());
    bumped[f] = std::min(1.0, bumped[f] + 0.5);
    const SimilarityTrack after = TrackFromMapped(bumped);
    for (const double frac : p.window_fractions) {
      const int len = static_cast<int>(frac * t);
      for (int o = 0; o + len <= t; o += p.stride) {
        if (f >= o && f < o + len) continue;
        EXPECT_GE(WindowScore(after, top) + 1e-12, WindowScore(after, {o, o + len, t}));
      }
    }
  }
}

TEST(ProposeTest, ErrorsAndValidation) {
  const SimilarityTrack tiny = TrackFromMapped({0.5, 0.5, 0.5});
  ProposalParams p;
  p.window_fractions = {0.2};
  EXPECT_EQ(CodeOf([&] { Propose(tiny, 1, 1, 0, p); }), ErrorCode::kNoCandidates);
  EXPECT_EQ(CodeOf([&] { Propose(tiny, 0, 1, 0, {}); }), ErrorCode::kContract);
  p.window_fractions = {0.5, 0.2};
  EXPECT_EQ(CodeOf([&] { p.Validate(); }), ErrorCode::kConfig);
  p.window_fractions = {0.2, 1.5};
  EXPECT_EQ(CodeOf([&] { p.Validate(); }), ErrorCode::kConfig);
  EXPECT_EQ(CodeOf([] { ReferencePredictor(ProposalParams{{0.5}, 0, 0.5, 5}); }),
            ErrorCode::kConfig);
}

TEST(RecordedPredictorTest, ParsesAndServesRecords) {
  const RecordedPredictor rp = RecordedPredictor::FromJsonLines(
      "{\"header\": {\"tool\": \"morp\"}}\n"
      "{\"epoch\": 1, \"annotation_id\": \"a\", \"predictions\": "
      "[{\"boundary_frames\": [2, 5], \"confidence\": 0.75}, "
      "{\"boundary_frames\": [0, 9], \"confidence\": 0.25}]}\n"
      "\n");
  const SimilarityTrack track = TrackFromMapped(std::vector<double>(10, 0.5));
  const auto out = rp.Predict({"a", track, 5, 1, 0});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].boundary, Boundary(2, 5, 10));
  EXPECT_EQ(out[0].confidence, 0.75);
  EXPECT_EQ(CodeOf([&] { rp.Predict({"a", track, 5, 2, 0}); }), ErrorCode::kPredictor);
  EXPECT_EQ(CodeOf([&] { rp.Predict({"b", track, 5, 1, 0}); }), ErrorCode::kPredictor);
  const SimilarityTrack short_track = TrackFromMapped(std::vector<double>(8, 0.5));
  EXPECT_EQ(CodeOf([&] { rp.Predict({"a", short_track, 5, 1, 0}); }), ErrorCode::kPredictor);
}

TEST(RecordedPredictorTest, RejectsMalformedLines) {
  EXPECT_EQ(CodeOf([] { RecordedPredictor::FromJsonLines("{oops"); }), ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([] {
              RecordedPredictor::FromJsonLines(
                  R"({"epoch": 1, "annotation_id": "a", "predictions": [{"boundary_frames": [1], "confidence": 1}]})");
            }),
            ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([] { RecordedPredictor::FromJsonLines(R"({"epoch": 1})"); }),
            ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([] { RecordedPredictor::FromFile("/nonexistent/p.jsonl"); }), ErrorCode::kIo);
}

}  // namespace
}  // namespace morp
