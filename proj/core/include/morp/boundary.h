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

#ifndef MORP_BOUNDARY_H_
#define MORP_BOUNDARY_H_

#include <cstdint>
#include <string>

namespace morp {

// Half-open frame interval [start, end) on a timeline of `timeline_len`
// frames. Construction enforces 0 <= start < end <= timeline_len.
class Boundary {
 public:
  Boundary(int start, int end, int timeline_len);

  int start() const { return start_; }
  int end() const { return end_; }
  int timeline_len() const { return timeline_len_; }
  int length() const { return end_ - start_; }

  bool operator==(const Boundary&) const = default;

  std::string ToString() const;

 private:
  int start_;
  int end_;
  int timeline_len_;
};

// A candidate boundary with a confidence in [0, 1].
struct ScoredBoundary {
  Boundary boundary;
  double confidence;

  bool operator==(const ScoredBoundary&) const = default;
};

// Intersection over union on frame counts. Both boundaries must share a
// timeline.
double Iou(const Boundary& a, const Boundary& b);

// Clips [start, end) to [0, timeline_len). Throws kDegenerateInterval when
// nothing of the interval remains.
Boundary Clamp(std::int64_t start, std::int64_t end, int timeline_len);

}  // namespace morp

#endif  // MORP_BOUNDARY_H_
