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

#ifndef MORP_PARALLEL_H_
#define MORP_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace morp {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Every index runs
// exactly once; callers write results into slot i so output never depends
// on scheduling. If any call throws, the exception from the lowest failing
// index is rethrown after all workers finish.
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace morp

#endif  // MORP_PARALLEL_H_
