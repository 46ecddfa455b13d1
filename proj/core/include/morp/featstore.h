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

// Binary frame/query feature files and seconds <-> frame conversion.
//
// Feature file layout (all integers and floats little-endian):
//
//   offset  size  field
//   0       4     magic "VMRP" (0x56 0x4D 0x52 0x50)
//   4       4     u32 format_version, always 1
//   8       4     u32 rows (T frames, or number of queries)
//   12      4     u32 dim (D)
//   16      4*T*D f32 payload, row-major
//
// Files must be exactly 16 + 4*T*D bytes long.

#ifndef MORP_FEATSTORE_H_
#define MORP_FEATSTORE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace morp {

inline constexpr char kFeatureMagic[4] = {'V', 'M', 'R', 'P'};
inline constexpr std::uint32_t kFeatureFormatVersion = 1;
inline constexpr std::size_t kFeatureHeaderBytes = 16;

// Dense rows x dim matrix of 32-bit floats. Every row is finite and not the
// all-zero vector, so cosine similarity against any row is defined.
class FeatureMatrix {
 public:
  // Throws kContract for rows < 1, dim < 1 or a size mismatch, and
  // kDataQuality for a non-finite entry or an all-zero row.
  FeatureMatrix(int rows, int dim, std::vector<float> data);

  int rows() const { return rows_; }
  int dim() const { return dim_; }
  std::span<const float> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  std::span<const float> data() const { return data_; }

  bool operator==(const FeatureMatrix&) const = default;

 private:
  int rows_;
  int dim_;
  std::vector<float> data_;
};

struct FeatureHeader {
  std::uint32_t version;
  std::uint32_t rows;
  std::uint32_t dim;
};

std::string EncodeFeatureMatrix(const FeatureMatrix& matrix);

// `origin` only labels errors (usually the file path).
FeatureMatrix DecodeFeatureMatrix(std::string_view bytes,
                                  std::string_view origin = "<memory>");

FeatureMatrix ReadFeatureFile(const std::filesystem::path& path);
void WriteFeatureFile(const FeatureMatrix& matrix,
                      const std::filesystem::path& path);

// Reads and checks only the 16-byte header.
FeatureHeader ReadFeatureHeader(const std::filesystem::path& path);

// floor(t / duration * num_frames) clamped to [0, num_frames]. Values within
// 1e-9 (relative) of an integer snap to it first, so FramesToSeconds round
// trips exactly. Throws kRange unless 0 <= t <= duration and duration > 0.
int SecondsToFrames(double t, double duration, int num_frames);

double FramesToSeconds(int frame, double duration, int num_frames);

}  // namespace morp

#endif  // MORP_FEATSTORE_H_
