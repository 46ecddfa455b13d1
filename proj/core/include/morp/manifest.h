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

// Corpus manifest: videos, pseudo annotations and where their features live.
//
// The manifest is one UTF-8 JSON document:
//
//   {
//     "format_version": 1,
//     "header": {"tool", "version", "config_hash", "seed"},      (optional)
//     "videos": [{"video_id", "duration_seconds", "num_frames",
//                 "feature_file_path"}],
//     "queries_file_path": "queries.vmrp",
//     "annotations": [{"annotation_id", "video_id", "query_text",
//                      "query_feature_ref", "boundary_seconds": [s, e],
//                      "status", "gt_boundary_seconds": [s, e] (optional),
//                      "error_tag" (optional)}],
//     "synth": {...}                                              (optional)
//   }
//
// Relative paths resolve against the manifest's directory.

#ifndef MORP_MANIFEST_H_
#define MORP_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "morp/boundary.h"
#include "morp/featstore.h"

namespace morp {

inline constexpr int kManifestFormatVersion = 1;

enum class AnnotationStatus { kRaw, kKept, kDropped, kAdjusted, kCorrected };

// Error classes a synthetic annotation was generated with.
enum class ErrorTag { kIdle, kUnmatched, kImprecise, kClean };

std::string_view StatusName(AnnotationStatus status);
AnnotationStatus ParseStatus(std::string_view name);
std::string_view ErrorTagName(ErrorTag tag);
ErrorTag ParseErrorTag(std::string_view name);

// raw -> kept | dropped, kept -> adjusted -> corrected.
bool IsAllowedTransition(AnnotationStatus from, AnnotationStatus to);

struct SecondsInterval {
  double start;
  double end;

  bool operator==(const SecondsInterval&) const = default;
};

struct VideoEntry {
  std::string video_id;
  double duration_seconds = 0.0;
  int num_frames = 0;
  std::string feature_file_path;

  bool operator==(const VideoEntry&) const = default;
};

struct PseudoAnnotation {
  std::string annotation_id;
  std::string video_id;
  std::string query_text;
  int query_feature_ref = 0;
  SecondsInterval boundary_seconds{0.0, 0.0};
  // Derived from boundary_seconds at load; kept in sync by SetBoundary.
  Boundary boundary_frames{0, 1, 1};
  AnnotationStatus status = AnnotationStatus::kRaw;
  std::optional<SecondsInterval> gt_boundary_seconds;
  std::optional<ErrorTag> error_tag;

  bool operator==(const PseudoAnnotation&) const = default;
};

// Throws kContract on a transition IsAllowedTransition rejects.
void SetStatus(PseudoAnnotation& annotation, AnnotationStatus status);

// Replaces the boundary (frames and seconds) with `frames` on `video`.
void SetBoundary(PseudoAnnotation& annotation, const Boundary& frames,
                 const VideoEntry& video);

// Seconds interval -> frames on the video's timeline. A zero-length frame
// span widens to one frame.
Boundary SecondsToBoundary(const SecondsInterval& seconds, const VideoEntry& video);

std::optional<Boundary> GroundTruthFrames(const PseudoAnnotation& annotation,
                                          const VideoEntry& video);

// Experiment provenance stamped on every artifact the tool writes.
struct Provenance {
  std::string tool;
  std::string version;
  std::string config_hash;
  std::uint64_t seed = 0;

  bool operator==(const Provenance&) const = default;
};

struct CorpusManifest {
  int format_version = kManifestFormatVersion;
  std::optional<Provenance> header;
  std::vector<VideoEntry> videos;
  std::string queries_file_path;
  std::vector<PseudoAnnotation> annotations;
  // Generator metadata as compact JSON text; empty when absent.
  std::string synth_json;
  // Directory relative paths resolve against. Not serialized.
  std::filesystem::path base_dir;

  std::filesystem::path ResolvePath(const std::string& path) const;

  bool operator==(const CorpusManifest&) const = default;
};

using VideoIndex = std::unordered_map<std::string, std::size_t>;
VideoIndex BuildVideoIndex(const CorpusManifest& manifest);

// Parses and validates manifest text. `base_dir` becomes the manifest's
// base_dir. When `query_rows` is set, every query_feature_ref must be below
// it. Throws kFormat, kVersion, kReferential or kRange.
CorpusManifest ParseManifest(std::string_view text,
                             const std::filesystem::path& base_dir,
                             std::optional<int> query_rows = std::nullopt);

// Serializes with relative paths rewritten against `target_dir`.
std::string SerializeManifest(const CorpusManifest& manifest,
                              const std::filesystem::path& target_dir);

// Reads, parses and validates, checking query references against the
// queries file header whenever the manifest has annotations.
CorpusManifest ReadManifest(const std::filesystem::path& path);
void WriteManifest(const CorpusManifest& manifest, const std::filesystem::path& path);

// A manifest with its features loaded. video_features[i] belongs to
// manifest.videos[i].
struct Corpus {
  CorpusManifest manifest;
  std::vector<FeatureMatrix> video_features;
  std::optional<FeatureMatrix> queries;

  std::span<const float> QueryFeature(const PseudoAnnotation& annotation) const;
};

// Loads every feature file and checks shapes: each video matrix has
// num_frames rows and one feature dimension is shared corpus-wide.
Corpus LoadCorpus(CorpusManifest manifest, int threads = 1);
Corpus LoadCorpus(const std::filesystem::path& manifest_path, int threads = 1);

// Writes feature files under `dir` at the manifest's relative paths, then
// the manifest itself at dir/manifest_name.
void WriteCorpus(const Corpus& corpus, const std::filesystem::path& dir,
                 const std::string& manifest_name = "manifest.json");

// Reads a whole file as bytes; kIo on failure.
std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace morp

#endif  // MORP_MANIFEST_H_
