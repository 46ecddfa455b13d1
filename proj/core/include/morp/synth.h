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

// Seeded synthetic corpora with known ground truth and the four annotation
// classes: clean, imprecise (right moment, noisy endpoints), unmatched
// (query absent from the video) and idle (nothing in the video stands out
// for the query).
//
// Sampling procedure. Every draw goes through morp::Rng (see rng.h). For
// video v, with base = SplitMix64(seed) ^ v, four independent streams are
// used, each Rng(MixSeed(base, stream_id)):
//
//   tag stream (1): for each annotation k in order, one Uniform01 u;
//     the tag is the first of idle, unmatched, imprecise, clean whose
//     cumulative probability exceeds u (clean takes the remainder).
//   boundary stream (2): duration = 30 + floor(Uniform01() * 1500) / 10
//     seconds; then per annotation k:
//       len   = UniformInt(lmin, lmax), lmin = max(1, T/8), lmax = max(lmin, T/2)
//       start = UniformInt(0, T - len)        -> ground truth [start, start+len)
//       imprecise: repeat { ds = round(sigma * Normal());
//                           de = round(sigma * Normal()) } until the
//                  endpoints clamped to [0, T] still satisfy s' < e'
//       unmatched, idle: len' = UniformInt(lmin, lmax),
//                        start' = UniformInt(0, T - len')
//       clean: the pseudo boundary is the ground truth
//   feature stream (3): query directions, then frames t = 0..T-1; see
//     synth.cc for the construction
//   text stream (4): placeholder query words
//
// Integer division is used for T/8 and T/2.

#ifndef MORP_SYNTH_H_
#define MORP_SYNTH_H_

#include <cstdint>
#include <optional>
#include <string>

#include "morp/manifest.h"

namespace morp {

struct SynthSpec {
  int n_videos = 500;
  int num_frames = 256;
  int dim = 16;
  int annotations_per_video = 2;
  double p_idle = 0.1;
  double p_unmatched = 0.1;
  double p_imprecise = 0.2;
  // Standard deviation of endpoint noise in frames; T/6 when unset.
  std::optional<double> boundary_noise_frames;
  double signal_level = 0.85;
  double noise_level = 0.45;
  // Per-frame standard deviation of mapped similarity around its target.
  double similarity_jitter = 0.05;
  std::uint64_t seed = 0;

  double p_clean() const { return 1.0 - p_idle - p_unmatched - p_imprecise; }
  double BoundaryNoise() const;
  // Throws kSpec when the spec cannot produce a valid corpus.
  void Validate() const;
  std::string ToJson() const;
};

// Streams of the sampling procedure above.
enum class SynthStream : std::uint64_t { kTag = 1, kBoundary = 2, kFeature = 3, kText = 4 };

std::uint64_t VideoSeed(std::uint64_t seed, int video_index);
ErrorTag TagFromUniform(double u, const SynthSpec& spec);

// In-memory corpus with relative paths "features/<video>.vmrp" and
// "queries.vmrp"; WriteCorpus puts it on disk.
Corpus GenerateCorpus(const SynthSpec& spec, int threads = 1);

}  // namespace morp

#endif  // MORP_SYNTH_H_
