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

#include "morp/featstore.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "morp/error.h"

namespace morp {
namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t GetU32(std::string_view bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i]))
         << (8 * i);
  }
  return v;
}

FeatureHeader ParseHeader(std::string_view bytes, std::string_view origin) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kFeatureMagic, 4) != 0) {
    throw Error(ErrorCode::kFormat, "bad feature file magic", std::string(origin));
  }
  if (bytes.size() < kFeatureHeaderBytes) {
    throw Error(ErrorCode::kTruncation, "feature file header is truncated",
                std::string(origin));
  }
  FeatureHeader h{GetU32(bytes, 4), GetU32(bytes, 8), GetU32(bytes, 12)};
  if (h.version != kFeatureFormatVersion) {
    throw Error(ErrorCode::kFormat,
                "unsupported feature file version " + std::to_string(h.version),
                std::string(origin));
  }
  return h;
}

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open file for reading", path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed", path.string());
  return bytes;
}

}  // namespace

FeatureMatrix::FeatureMatrix(int rows, int dim, std::vector<float> data)
    : rows_(rows), dim_(dim), data_(std::move(data)) {
  if (rows < 1 || dim < 1) {
    throw Error(ErrorCode::kContract, "feature matrix needs rows >= 1 and dim >= 1",
                std::to_string(rows) + "x" + std::to_string(dim));
  }
  if (data_.size() != static_cast<std::size_t>(rows) * dim) {
    throw Error(ErrorCode::kContract, "feature data size does not match shape");
  }
  for (int r = 0; r < rows; ++r) {
    bool nonzero = false;
    for (const float x : row(r)) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kDataQuality, "non-finite feature value",
                    "row " + std::to_string(r));
      }
      nonzero = nonzero || x != 0.0f;
    }
    if (!nonzero) {
      throw Error(ErrorCode::kDataQuality, "all-zero feature row",
                  "row " + std::to_string(r));
    }
  }
}

std::string EncodeFeatureMatrix(const FeatureMatrix& matrix) {
  std::string out;
  out.reserve(kFeatureHeaderBytes + matrix.data().size() * 4);
  out.append(kFeatureMagic, 4);
  PutU32(out, kFeatureFormatVersion);
  PutU32(out, static_cast<std::uint32_t>(matrix.rows()));
  PutU32(out, static_cast<std::uint32_t>(matrix.dim()));
  for (const float x : matrix.data()) PutU32(out, std::bit_cast<std::uint32_t>(x));
  return out;
}

FeatureMatrix DecodeFeatureMatrix(std::string_view bytes, std::string_view origin) {
  const FeatureHeader h = ParseHeader(bytes, origin);
  const std::uint64_t count = static_cast<std::uint64_t>(h.rows) * h.dim;
  const std::uint64_t expected = kFeatureHeaderBytes + count * 4;
  if (bytes.size() < expected) {
    throw Error(ErrorCode::kTruncation,
                "feature payload holds " +
                    std::to_string((bytes.size() - kFeatureHeaderBytes) / 4) +
                    " values, header promises " + std::to_string(count),
                std::string(origin));
  }
  if (bytes.size() > expected) {
    throw Error(ErrorCode::kFormat, "trailing bytes after feature payload",
                std::string(origin));
  }
  if (h.rows > static_cast<std::uint32_t>(std::numeric_limits<int>::max()) ||
      h.dim > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
    throw Error(ErrorCode::kFormat, "feature shape out of range", std::string(origin));
  }
  std::vector<float> data(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    data[i] = std::bit_cast<float>(GetU32(bytes, kFeatureHeaderBytes + 4 * i));
  }
  try {
    return FeatureMatrix(static_cast<int>(h.rows), static_cast<int>(h.dim),
                         std::move(data));
  } catch (const Error& e) {
    // A zero-row file is malformed input rather than a caller bug.
    const ErrorCode code =
        e.code() == ErrorCode::kContract ? ErrorCode::kFormat : e.code();
    throw Error(code, e.what(), std::string(origin) + ": " + e.context());
  }
}

FeatureMatrix ReadFeatureFile(const std::filesystem::path& path) {
  return DecodeFeatureMatrix(ReadAll(path), path.string());
}

void WriteFeatureFile(const FeatureMatrix& matrix,
                      const std::filesystem::path& path) {
  const std::string bytes = EncodeFeatureMatrix(matrix);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open file for writing", path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed", path.string());
}

FeatureHeader ReadFeatureHeader(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open file for reading", path.string());
  char buf[kFeatureHeaderBytes];
  in.read(buf, sizeof(buf));
  return ParseHeader(std::string_view(buf, static_cast<std::size_t>(in.gcount())),
                     path.string());
}

int SecondsToFrames(double t, double duration, int num_frames) {
  if (!(duration > 0.0) || !(t >= 0.0 && t <= duration)) {
    throw Error(ErrorCode::kRange, "time outside [0, duration]",
                "t=" + std::to_string(t) + " duration=" + std::to_string(duration));
  }
  const double x = t / duration * num_frames;
  const double nearest = std::nearbyint(x);
  const double snapped =
      std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x)) ? nearest
                                                                  : std::floor(x);
  return static_cast<int>(std::clamp(snapped, 0.0, static_cast<double>(num_frames)));
}

double FramesToSeconds(int frame, double duration, int num_frames) {
  if (frame >= num_frames) return duration;
  return std::min(duration, static_cast<double>(frame) * duration / num_frames);
}

}  // namespace morp
