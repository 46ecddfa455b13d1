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

#include "morp/boundary.h"

#include <algorithm>

#include "morp/error.h"

namespace morp {

Boundary::Boundary(int start, int end, int timeline_len)
    : start_(start), end_(end), timeline_len_(timeline_len) {
  if (!(0 <= start && start < end && end <= timeline_len)) {
    throw Error(ErrorCode::kContract,
                "invalid boundary: requires 0 <= start < end <= T",
                ToString());
  }
}

std::string Boundary::ToString() const {
  return "[" + std::to_string(start_) + "," + std::to_string(end_) +
         ") T=" + std::to_string(timeline_len_);
}

double Iou(const Boundary& a, const Boundary& b) {
  if (a.timeline_len() != b.timeline_len()) {
    throw Error(ErrorCode::kContract, "IoU of boundaries on different timelines",
                a.ToString() + " vs " + b.ToString());
  }
  const int inter =
      std::max(0, std::min(a.end(), b.end()) - std::max(a.start(), b.start()));
  const int uni = a.length() + b.length() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

Boundary Clamp(std::int64_t start, std::int64_t end, int timeline_len) {
  const std::int64_t lo = std::max<std::int64_t>(start, 0);
  const std::int64_t hi = std::min<std::int64_t>(end, timeline_len);
  if (timeline_len < 1 || hi <= lo) {
    throw Error(ErrorCode::kDegenerateInterval,
                "interval does not overlap the timeline",
                "(" + std::to_string(start) + ", " + std::to_string(end) +
                    ") T=" + std::to_string(timeline_len));
  }
  return Boundary(static_cast<int>(lo), static_cast<int>(hi), timeline_len);
}

}  // namespace morp
