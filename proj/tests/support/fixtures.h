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

#ifndef MORP_TESTS_SUPPORT_FIXTURES_H_
#define MORP_TESTS_SUPPORT_FIXTURES_H_

#include <string>

#include "morp/eval.h"

namespace morp::fixture {

// Ten queries against ground truth [0,10) on a 100-frame timeline, with
// hand-counted IoUs 1, 1/2, 1/3, 9/10, 1/2, 0, 6/10, 7/10, 7/10, 3/10.
struct TenQueries {
  BoundaryMap predictions;
  BoundaryMap ground_truth;
  // Hand-computed: count of IoU strictly above m, times 10.
  static constexpr double kRecallAt03 = 80.0;
  static constexpr double kRecallAt05 = 50.0;
  static constexpr double kRecallAt07 = 20.0;
  static constexpr double kRecallAt09 = 10.0;
  static constexpr double kRecallAt01 = 90.0;
  // (1 + .5 + 1/3 + .9 + .5 + 0 + .6 + .7 + .7 + .3) / 10 * 100.
  static constexpr double kMeanIou = 55.0 + 1.0 / 3.0;
};

inline TenQueries MakeTenQueries() {
  TenQueries f;
  const int spans[10][2] = {{0, 10}, {0, 5}, {5, 15}, {1, 10}, {0, 20},
                            {20, 30}, {2, 8}, {0, 7}, {3, 10}, {0, 3}};
  for (int i = 0; i < 10; ++i) {
    const std::string id = "q" + std::to_string(i);
    f.predictions.emplace(id, Boundary(spans[i][0], spans[i][1], 100));
    f.ground_truth.emplace(id, Boundary(0, 10, 100));
  }
  return f;
}

}  // namespace morp::fixture

#endif  // MORP_TESTS_SUPPORT_FIXTURES_H_
