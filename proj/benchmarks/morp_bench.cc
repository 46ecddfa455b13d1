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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "morp/consensus.h"
#include "morp/pipeline.h"
#include "morp/predictor.h"
#include "morp/refine.h"
#include "morp/synth.h"

namespace morp {
namespace {

SimilarityTrack RandomTrack(int len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> mapped(len);
  for (double& m : mapped) m = u(rng);
  return TrackFromMapped(std::move(mapped));
}

void BM_MomentContrast(benchmark::State& state) {
  const int len = static_cast<int>(state.range(0));
  const SimilarityTrack track = RandomTrack(len, 1);
  const Boundary b(len / 4, len / 2, len);
  for (auto _ : state) benchmark::DoNotOptimize(MomentContrast(track, b));
}
BENCHMARK(BM_MomentContrast)->Arg(128)->Arg(1024);

void BM_SelectConsensus(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::vector<Boundary> bank;
  for (int k = 0; k < n; ++k) {
    const int s = static_cast<int>(rng() % 200);
    bank.emplace_back(s, s + 1 + static_cast<int>(rng() % 56), 256);
  }
  for (auto _ : state) benchmark::DoNotOptimize(SelectConsensus(bank));
}
BENCHMARK(BM_SelectConsensus)->Arg(8)->Arg(32);

void BM_AdjustBoundary(benchmark::State& state) {
  const SimilarityTrack track = RandomTrack(256, 3);
  const AdjustParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(AdjustBoundary(track, Boundary(60, 140, 256), params));
  }
}
BENCHMARK(BM_AdjustBoundary);

void BM_Propose(benchmark::State& state) {
  const SimilarityTrack track = RandomTrack(static_cast<int>(state.range(0)), 4);
  const ProposalParams params;
  int epoch = 0;
  for (auto _ : state) benchmark::DoNotOptimize(Propose(track, 5, ++epoch % 15 + 1, 7, params));
}
BENCHMARK(BM_Propose)->Arg(128)->Arg(256);

void BM_Pipeline(benchmark::State& state) {
  SynthSpec spec;
  spec.n_videos = static_cast<int>(state.range(0));
  const Corpus corpus = GenerateCorpus(spec);
  const PipelineConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(RunPipeline(corpus, config));
  state.SetItemsProcessed(state.iterations() * spec.n_videos);
}
BENCHMARK(BM_Pipeline)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace morp

BENCHMARK_MAIN();
