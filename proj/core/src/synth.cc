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

#include "morp/synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "morp/error.h"
#include "morp/parallel.h"
#include "morp/refine.h"
#include "morp/rng.h"

namespace morp {
namespace {

constexpr int kMaxRedraws = 1000;

constexpr std::array<const char*, 8> kSubjects = {
    "a person", "a man", "a woman", "the child", "someone", "a chef", "the player", "a dog"};
constexpr std::array<const char*, 10> kVerbs = {
    "opens", "picks up", "throws", "washes", "holds", "puts down", "looks at", "cuts",
    "carries", "cleans"};
constexpr std::array<const char*, 10> kObjects = {
    "the door", "a cup", "the ball", "a towel", "the box", "a phone", "the vegetables",
    "a book", "the window", "a bag"};
constexpr std::array<const char*, 6> kPlaces = {
    "in the kitchen", "outside", "near the table", "on the field", "at home", "slowly"};

struct VideoOutput {
  VideoEntry video;
  std::vector<PseudoAnnotation> annotations;
  std::vector<float> frames;   // T x D
  std::vector<float> queries;  // A x D
};

template <std::size_t N>
const char* Pick(Rng& rng, const std::array<const char*, N>& words) {
  return words[static_cast<std::size_t>(rng.UniformInt(0, N - 1))];
}

// Unit Gaussian direction with the components along `basis` removed.
std::vector<double> OrthogonalDirection(Rng& rng, int dim,
                                        const std::vector<std::vector<double>>& basis) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    std::vector<double> g(dim);
    for (double& x : g) x = rng.Normal();
    for (const auto& q : basis) {
      double dot = 0.0;
      for (int d = 0; d < dim; ++d) dot += g[d] * q[d];
      for (int d = 0; d < dim; ++d) g[d] -= dot * q[d];
    }
    double norm = 0.0;
    for (const double x : g) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 1e-6) {
      for (double& x : g) x /= norm;
      return g;
    }
  }
  throw Error(ErrorCode::kSpec, "could not draw an orthogonal direction");
}

VideoOutput GenerateVideo(const SynthSpec& spec, int v) {
  const int t_len = spec.num_frames;
  const int dim = spec.dim;
  const int n_ann = spec.annotations_per_video;
  const std::uint64_t base = VideoSeed(spec.seed, v);
  Rng tag_rng(MixSeed(base, static_cast<std::uint64_t>(SynthStream::kTag)));
  Rng bnd_rng(MixSeed(base, static_cast<std::uint64_t>(SynthStream::kBoundary)));
  Rng feat_rng(MixSeed(base, static_cast<std::uint64_t>(SynthStream::kFeature)));
  Rng text_rng(MixSeed(base, static_cast<std::uint64_t>(SynthStream::kText)));

  char id[32];
  std::snprintf(id, sizeof(id), "vid%05d", v);
  VideoOutput out;
  out.video.video_id = id;
  out.video.num_frames = t_len;
  out.video.feature_file_path = std::string("features/") + id + ".vmrp";

  std::vector<ErrorTag> tags(n_ann);
  for (int k = 0; k < n_ann; ++k) tags[k] = TagFromUniform(tag_rng.Uniform01(), spec);

  out.video.duration_seconds = 30.0 + std::floor(bnd_rng.Uniform01() * 1500.0) / 10.0;
  const int lmin = std::max(1, t_len / 8);
  const int lmax = std::max(lmin, t_len / 2);
  const double sigma = spec.BoundaryNoise();
  std::vector<Boundary> gts;
  std::vector<Boundary> pseudo;
  for (int k = 0; k < n_ann; ++k) {
    const int len = static_cast<int>(bnd_rng.UniformInt(lmin, lmax));
    const int start = static_cast<int>(bnd_rng.UniformInt(0, t_len - len));
    const Boundary gt(start, start + len, t_len);
    gts.push_back(gt);
    switch (tags[k]) {
      case ErrorTag::kClean:
        pseudo.push_back(gt);
        break;
      case ErrorTag::kImprecise: {
        std::optional<Boundary> noisy;
        for (int attempt = 0; attempt < kMaxRedraws && !noisy; ++attempt) {
          const auto ds = static_cast<std::int64_t>(std::lround(sigma * bnd_rng.Normal()));
          const auto de = static_cast<std::int64_t>(std::lround(sigma * bnd_rng.Normal()));
          const std::int64_t s = std::clamp<std::int64_t>(gt.start() + ds, 0, t_len);
          const std::int64_t e = std::clamp<std::int64_t>(gt.end() + de, 0, t_len);
          if (s < e) noisy = Boundary(static_cast<int>(s), static_cast<int>(e), t_len);
        }
        if (!noisy) throw Error(ErrorCode::kSpec, "boundary noise keeps degenerating", id);
        pseudo.push_back(*noisy);
        break;
      }
      case ErrorTag::kUnmatched:
      case ErrorTag::kIdle: {
        const int l2 = static_cast<int>(bnd_rng.UniformInt(lmin, lmax));
        const int s2 = static_cast<int>(bnd_rng.UniformInt(0, t_len - l2));
        pseudo.emplace_back(s2, s2 + l2, t_len);
        break;
      }
    }
  }

  // Orthonormal query directions, one per annotation.
  std::vector<std::vector<double>> queries;
  for (int k = 0; k < n_ann; ++k) queries.push_back(OrthogonalDirection(feat_rng, dim, queries));

  // Frame t = sum_k c_k q_k + r n_t, scaled by a random magnitude, where
  // c_k is the target cosine for query k (2 m - 1 for mapped target m) and
  // n_t is a unit direction orthogonal to every query, so cos(q_k, v_t) is
  // exactly c_k when sum c_k^2 <= 1. Targets: clean/imprecise use
  // signal_level inside the ground truth and noise_level outside;
  // unmatched/idle use 0.5 everywhere. Each target gets
  // similarity_jitter * Normal() added and is clamped to [0.02, 0.98].
  out.frames.resize(static_cast<std::size_t>(t_len) * dim);
  std::vector<double> c(n_ann);
  for (int t = 0; t < t_len; ++t) {
    double sum_sq = 0.0;
    for (int k = 0; k < n_ann; ++k) {
      double m = 0.5;
      if (tags[k] == ErrorTag::kClean || tags[k] == ErrorTag::kImprecise) {
        m = (t >= gts[k].start() && t < gts[k].end()) ? spec.signal_level : spec.noise_level;
      }
      m = std::clamp(m + spec.similarity_jitter * feat_rng.Normal(), 0.02, 0.98);
      c[k] = 2.0 * m - 1.0;
      sum_sq += c[k] * c[k];
    }
    const std::vector<double> noise = OrthogonalDirection(feat_rng, dim, queries);
    double residual = 0.0;
    if (sum_sq > 1.0) {
      for (double& ck : c) ck /= std::sqrt(sum_sq);
    } else {
      residual = std::sqrt(1.0 - sum_sq);
    }
    const double magnitude = feat_rng.UniformReal(0.5, 2.0);
    for (int d = 0; d < dim; ++d) {
      double x = residual * noise[d];
      for (int k = 0; k < n_ann; ++k) x += c[k] * queries[k][d];
      out.frames[static_cast<std::size_t>(t) * dim + d] = static_cast<float>(magnitude * x);
    }
  }
  for (const auto& q : queries) {
    for (const double x : q) out.queries.push_back(static_cast<float>(x));
  }

  for (int k = 0; k < n_ann; ++k) {
    PseudoAnnotation a;
    char aid[48];
    std::snprintf(aid, sizeof(aid), "%s_q%d", id, k);
    a.annotation_id = aid;
    a.video_id = id;
    a.query_text = std::string(Pick(text_rng, kSubjects)) + " " + Pick(text_rng, kVerbs) + " " +
                   Pick(text_rng, kObjects) + " " + Pick(text_rng, kPlaces) + ".";
    a.query_feature_ref = v * n_ann + k;
    SetBoundary(a, pseudo[k], out.video);
    a.status = AnnotationStatus::kRaw;
    a.error_tag = tags[k];
    if (tags[k] == ErrorTag::kClean || tags[k] == ErrorTag::kImprecise) {
      a.gt_boundary_seconds = SecondsInterval{
          FramesToSeconds(gts[k].start(), out.video.duration_seconds, t_len),
          FramesToSeconds(gts[k].end(), out.video.duration_seconds, t_len)};
    }
    out.annotations.push_back(std::move(a));
  }
  return out;
}

// Clean annotations must show their signal: mean mapped relevance inside
// the ground truth exceeds the outside by at least half the level gap.
void SelfCheck(const SynthSpec& spec, const VideoOutput& out) {
  const FeatureMatrix frames(spec.num_frames, spec.dim, out.frames);
  for (std::size_t k = 0; k < out.annotations.size(); ++k) {
    const PseudoAnnotation& a = out.annotations[k];
    if (a.error_tag != ErrorTag::kClean) continue;
    const SimilarityTrack track = FrameSimilarities(
        std::span<const float>(out.queries).subspan(k * spec.dim, spec.dim), frames);
    const Boundary gt = a.boundary_frames;
    const double inside = track.Mean(gt.start(), gt.end());
    const int outside_n = track.length() - gt.length();
    if (outside_n == 0) continue;
    const double outside =
        (track.Sum(0, gt.start()) + track.Sum(gt.end(), track.length())) / outside_n;
    if (inside - outside < (spec.signal_level - spec.noise_level) / 2.0) {
      throw Error(ErrorCode::kSpec, "generated clean annotation lacks contrast",
                  a.annotation_id);
    }
  }
}

}  // namespace

double SynthSpec::BoundaryNoise() const {
  return boundary_noise_frames ? *boundary_noise_frames : num_frames / 6.0;
}

void SynthSpec::Validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kSpec, msg); };
  if (n_videos < 0) fail("n_videos must be >= 0");
  if (num_frames < 8) fail("num_frames must be >= 8 for nondegenerate boundaries");
  if (annotations_per_video < 1) fail("annotations_per_video must be >= 1");
  if (dim < annotations_per_video + 1) fail("dim must exceed annotations_per_video");
  for (const double p : {p_idle, p_unmatched, p_imprecise}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probabilities must lie in [0, 1]");
  }
  if (p_idle + p_unmatched + p_imprecise > 1.0 + 1e-12) fail("probabilities sum above 1");
  if (!(signal_level >= 0.0 && signal_level <= 1.0 && noise_level >= 0.0 &&
        noise_level <= 1.0)) {
    fail("similarity levels must lie in [0, 1]");
  }
  if (!(signal_level > noise_level)) fail("signal_level must exceed noise_level");
  if (!(BoundaryNoise() >= 0.0)) fail("boundary noise must be >= 0");
  if (!(similarity_jitter >= 0.0)) fail("similarity jitter must be >= 0");
}

std::string SynthSpec::ToJson() const {
  nlohmann::ordered_json j{{"n_videos", n_videos},
                           {"num_frames", num_frames},
                           {"dim", dim},
                           {"annotations_per_video", annotations_per_video},
                           {"p_idle", p_idle},
                           {"p_unmatched", p_unmatched},
                           {"p_imprecise", p_imprecise},
                           {"p_clean", p_clean()},
                           {"boundary_noise_frames", BoundaryNoise()},
                           {"signal_level", signal_level},
                           {"noise_level", noise_level},
                           {"similarity_jitter", similarity_jitter},
                           {"seed", seed}};
  return j.dump();
}

std::uint64_t VideoSeed(std::uint64_t seed, int video_index) {
  return SplitMix64(seed) ^ static_cast<std::uint64_t>(video_index);
}

ErrorTag TagFromUniform(double u, const SynthSpec& spec) {
  double acc = spec.p_idle;
  if (u < acc) return ErrorTag::kIdle;
  acc += spec.p_unmatched;
  if (u < acc) return ErrorTag::kUnmatched;
  acc += spec.p_imprecise;
  if (u < acc) return ErrorTag::kImprecise;
  return ErrorTag::kClean;
}

Corpus GenerateCorpus(const SynthSpec& spec, int threads) {
  spec.Validate();
  std::vector<std::optional<VideoOutput>> videos(spec.n_videos);
  ParallelFor(videos.size(), threads, [&](std::size_t v) {
    VideoOutput out = GenerateVideo(spec, static_cast<int>(v));
    SelfCheck(spec, out);
    videos[v] = std::move(out);
  });

  Corpus corpus;
  CorpusManifest& m = corpus.manifest;
  m.queries_file_path = "queries.vmrp";
  m.synth_json = spec.ToJson();
  std::vector<float> query_rows;
  for (auto& out : videos) {
    m.videos.push_back(out->video);
    for (auto& a : out->annotations) m.annotations.push_back(std::move(a));
    query_rows.insert(query_rows.end(), out->queries.begin(), out->queries.end());
    corpus.video_features.emplace_back(spec.num_frames, spec.dim, std::move(out->frames));
  }
  if (!m.annotations.empty()) {
    corpus.queries.emplace(static_cast<int>(m.annotations.size()), spec.dim,
                           std::move(query_rows));
  } else {
    m.queries_file_path.clear();
  }
  return corpus;
}

}  // namespace morp
