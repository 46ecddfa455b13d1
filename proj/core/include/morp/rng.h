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

#ifndef MORP_RNG_H_
#define MORP_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace morp {

std::uint64_t SplitMix64(std::uint64_t x);

// FNV-1a, 64 bit.
std::uint64_t HashString(std::string_view s);

// Order-sensitive combination of two seeds.
std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b);

// Seeded generator with fully specified draw semantics, so that sampling
// procedures can be replayed bit-for-bit on any platform:
//
//   engine     std::mt19937_64 seeded with SplitMix64(seed)
//   Uniform01  (engine() >> 11) * 2^-53, in [0, 1)
//   UniformInt lo + floor(Uniform01() * (hi - lo + 1)), in [lo, hi]
//   Normal     Box-Muller on two fresh uniforms u1, u2:
//              sqrt(-2 ln(1 - u1)) * cos(2 pi u2); no value is cached
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double Uniform01();
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);
  double UniformReal(double lo, double hi);
  double Normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace morp

#endif  // MORP_RNG_H_
