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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "morp/error.h"
#include "support/temp_dir.h"

namespace morp {
namespace {

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutF32(std::string& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  PutU32(out, bits);
}

std::string HandFile(std::uint32_t rows, std::uint32_t dim, const std::vector<float>& payload) {
  std::string out = "VMRP";
  PutU32(out, 1);
  PutU32(out, rows);
  PutU32(out, dim);
  for (const float f : payload) PutF32(out, f);
  return out;
}

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no morp::Error thrown";
  return ErrorCode::kContract;
}

FeatureMatrix RandomMatrix(std::mt19937_64& gen, int rows, int dim) {
  std::normal_distribution<float> n(0.0f, 1.0f);
  std::vector<float> data(static_cast<std::size_t>(rows) * dim);
  for (float& x : data) x = n(gen);
  for (int r = 0; r < rows; ++r) data[static_cast<std::size_t>(r) * dim] += 10.0f;
  return FeatureMatrix(rows, dim, std::move(data));
}

TEST(FeatureFileTest, DecodesIndependentlyWrittenBytes) {
  const std::vector<float> payload = {1.0f, -2.5f, 3.25f, 0.0f, 1e-3f, -7.0f};
  const FeatureMatrix m = DecodeFeatureMatrix(HandFile(2, 3, payload));
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.dim(), 3);
  for (std::size_t i = 0; i < payload.size(); ++i) EXPECT_EQ(m.data()[i], payload[i]);
  EXPECT_EQ(EncodeFeatureMatrix(m), HandFile(2, 3, payload));
}

TEST(FeatureFileTest, OneByOneIsTwentyBytes) {
  const FeatureMatrix m(1, 1, {0.5f});
  EXPECT_EQ(EncodeFeatureMatrix(m).size(), 20u);
  EXPECT_EQ(kFeatureHeaderBytes, 16u);
}

TEST(FeatureFileTest, RejectsCorruptInputs) {
  std::string bad_magic = HandFile(1, 1, {1.0f});
  bad_magic[0] = 'X';
  EXPECT_EQ(CodeOf([&] { DecodeFeatureMatrix(bad_magic); }), ErrorCode::kFormat);

  const std::vector<float> fifty_rows(50, 1.0f);
  EXPECT_EQ(CodeOf([&] { DecodeFeatureMatrix(HandFile(100, 1, fifty_rows)); }),
            ErrorCode::kTruncation);
  EXPECT_EQ(CodeOf([&] { DecodeFeatureMatrix("VMRP\1\0"); }), ErrorCode::kTruncation);

  std::string trailing = HandFile(1, 1, {1.0f}) + "x";
  EXPECT_EQ(CodeOf([&] { DecodeFeatureMatrix(trailing); }), ErrorCode::kFormat);

  std::string version = HandFile(1, 1, {1.0f});
  version[4] = 2;
  EXPECT_EQ(CodeOf([&] { DecodeFeatureMatrix(version); }), ErrorCode::kFormat);

  EXPECT_EQ(CodeOf([&] { DecodeFeatureMatrix(HandFile(0, 3, {})); }), ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([&] { DecodeFeatureMatrix(HandFile(1, 2, {0.0f, 0.0f})); }),
            ErrorCode::kDataQuality);
  EXPECT_EQ(
      CodeOf([&] { DecodeFeatureMatrix(HandFile(1, 2, {1.0f, std::nanf("")})); }),
      ErrorCode::kDataQuality);
}

TEST(FeatureMatrixTest, EnforcesShapeContract) {
  EXPECT_EQ(CodeOf([] { FeatureMatrix(0, 3, {}); }), ErrorCode::kContract);
  EXPECT_EQ(CodeOf([] { FeatureMatrix(1, 0, {}); }), ErrorCode::kContract);
  EXPECT_EQ(CodeOf([] { FeatureMatrix(2, 2, {1, 2, 3}); }), ErrorCode::kContract);
  EXPECT_EQ(CodeOf([] {
              FeatureMatrix(1, 1, {std::numeric_limits<float>::infinity()});
            }),
            ErrorCode::kDataQuality);
}

TEST(FeatureFileTest, RoundTripIsByteExact) {
  std::mt19937_64 gen(3);
  testing::TempDir dir;
  for (int i = 0; i < 20; ++i) {
    const FeatureMatrix m = RandomMatrix(gen, 1 + static_cast<int>(gen() % 40),
                                         1 + static_cast<int>(gen() % 9));
    const std::string bytes = EncodeFeatureMatrix(m);
    const FeatureMatrix back = DecodeFeatureMatrix(bytes);
    EXPECT_EQ(back, m);
    EXPECT_EQ(EncodeFeatureMatrix(back), bytes);

    const auto path = dir / ("m" + std::to_string(i) + ".vmrp");
    WriteFeatureFile(m, path);
    EXPECT_EQ(ReadFeatureFile(path), m);
    const FeatureHeader h = ReadFeatureHeader(path);
    EXPECT_EQ(h.rows, static_cast<std::uint32_t>(m.rows()));
    EXPECT_EQ(h.dim, static_cast<std::uint32_t>(m.dim()));
  }
}

TEST(FeatureFileTest, MissingFileIsIoError) {
  EXPECT_EQ(CodeOf([] { ReadFeatureFile("/nonexistent/x.vmrp"); }), ErrorCode::kIo);
}

TEST(SecondsToFramesTest, HandExamples) {
  EXPECT_EQ(SecondsToFrames(0.0, 100.0, 10), 0);
  EXPECT_EQ(SecondsToFrames(100.0, 100.0, 10), 10);
  EXPECT_EQ(SecondsToFrames(50.0, 100.0, 10), 5);
  EXPECT_EQ(SecondsToFrames(54.9, 100.0, 10), 5);
  EXPECT_EQ(CodeOf([] { SecondsToFrames(-0.1, 100.0, 10); }), ErrorCode::kRange);
  EXPECT_EQ(CodeOf([] { SecondsToFrames(100.1, 100.0, 10); }), ErrorCode::kRange);
  EXPECT_EQ(CodeOf([] { SecondsToFrames(1.0, 0.0, 10); }), ErrorCode::kRange);
}

TEST(SecondsToFramesTest, MonotoneInTime) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double duration = 1.0 + 300.0 * u(gen);
    const int frames = 1 + static_cast<int>(gen() % 512);
    int prev = 0;
    for (int k = 0; k <= 500; ++k) {
      const int f = SecondsToFrames(std::min(duration, duration * k / 500.0), duration, frames);
      EXPECT_GE(f, prev);
      prev = f;
    }
    EXPECT_EQ(prev, frames);
  }
}

TEST(SecondsToFramesTest, FrameRoundTripIsExact) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0.5, 500.0);
  for (int i = 0; i < 300; ++i) {
    const double duration = u(gen);
    const int frames = 1 + static_cast<int>(gen() % 1024);
    for (int f = 0; f <= frames; f += 1 + frames / 37) {
      EXPECT_EQ(SecondsToFrames(FramesToSeconds(f, duration, frames), duration, frames), f);
    }
  }
}

}  // namespace
}  // namespace morp
