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

// Reference implementations written straight from the definitions, with no
// prefix sums, caching or shared code from the library.

#ifndef MORP_TESTS_SUPPORT_ORACLES_H_
#define MORP_TESTS_SUPPORT_ORACLES_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace morp::oracle {

using Interval = std::pair<int, int>;

// Counts shared and covered frames one by one.
inline double Iou(Interval a, Interval b) {
  const int lo = std::min(a.first, b.first);
  const int hi = std::max(a.second, b.second);
  int inter = 0;
  int uni = 0;
  for (int t = lo; t < hi; ++t) {
    const bool in_a = t >= a.first && t < a.second;
    const bool in_b = t >= b.first && t < b.second;
    inter += in_a && in_b;
    uni += in_a || in_b;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

inline double Gamma(const std::vector<double>& mapped, Interval b) {
  double inside = 0.0;
  double outside = 0.0;
  for (int t = 0; t < static_cast<int>(mapped.size()); ++t) {
    if (t >= b.first && t < b.second) {
      inside += mapped[t];
    } else {
      outside += mapped[t];
    }
  }
  if (outside < 1e-8) return 1e6;
  return std::min(inside / outside, 1e6);
}

// O(N^2) pairwise scores, argmax with the earliest index among scores
// within 1e-12 of the maximum.
inline std::size_t Consensus(const std::vector<Interval>& bank) {
  std::vector<double> scores(bank.size(), 0.0);
  for (std::size_t r = 0; r < bank.size(); ++r) {
    for (std::size_t k = 0; k < bank.size(); ++k) {
      if (k != r) scores[r] += Iou(bank[r], bank[k]);
    }
  }
  double best = scores[0];
  for (const double s : scores) best = std::max(best, s);
  for (std::size_t r = 0; r < scores.size(); ++r) {
    if (scores[r] >= best - 1e-12) return r;
  }
  return 0;
}

// Replays the synthetic generator's tag stream from its documentation.
class TagReplay {
 public:
  static std::uint64_t Mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Tags as 0 idle, 1 unmatched, 2 imprecise, 3 clean.
  static std::vector<int> Tags(std::uint64_t seed, int n_videos, int per_video, double p_idle,
                               double p_unmatched, double p_imprecise) {
    std::vector<int> out;
    for (int v = 0; v < n_videos; ++v) {
      const std::uint64_t base = Mix(seed) ^ static_cast<std::uint64_t>(v);
      const std::uint64_t stream = Mix(Mix(base) ^ 1ULL);
      std::mt19937_64 engine(Mix(stream));
      for (int k = 0; k < per_video; ++k) {
        const double u = static_cast<double>(engine() >> 11) / 9007199254740992.0;
        if (u < p_idle) {
          out.push_back(0);
        } else if (u < p_idle + p_unmatched) {
          out.push_back(1);
        } else if (u < p_idle + p_unmatched + p_imprecise) {
          out.push_back(2);
        } else {
          out.push_back(3);
        }
      }
    }
    return out;
  }
};

}  // namespace morp::oracle

#endif  // MORP_TESTS_SUPPORT_ORACLES_H_
